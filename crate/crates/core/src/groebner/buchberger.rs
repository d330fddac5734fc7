use super::vector::{cmp_terms, reduce, SVec, Term};
use crate::order::MonomialOrder;
use crate::poly::Monomial;

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

struct State {
    order: MonomialOrder,
    rank: usize,
    basis: Vec<SVec>,
    sugar: Vec<u32>,
    pairs: Vec<Pair>,
}

impl State {
    fn lead(&self, i: usize) -> &Term {
        self.basis[i].lead()
    }

    fn add(&mut self, h: SVec, sugar: u32) {
        let k = self.basis.len();
        let lh = h.lead().clone();
        self.basis.push(h);
        self.sugar.push(sugar);

        // Gebauer–Möller criterion B on pending pairs.
        let basis = &self.basis;
        self.pairs.retain(|p| {
            let (li, lj) = (basis[p.i].lead(), basis[p.j].lead());
            if li.comp != lh.comp || !lh.mono.divides(&p.lcm) {
                return true;
            }
            let lik = li.mono.lcm(&lh.mono);
            let ljk = lj.mono.lcm(&lh.mono);
            lik == p.lcm || ljk == p.lcm
        });

        for i in 0..k {
            let li = self.lead(i);
            if li.comp != lh.comp {
                continue;
            }
            // Buchberger's first criterion only holds for ideals.
            if self.rank == 1 && li.mono.is_coprime(&lh.mono) {
                continue;
            }
            let lcm = li.mono.lcm(&lh.mono);
            let di = lcm.degree() - li.mono.degree();
            let dk = lcm.degree() - lh.mono.degree();
            let sugar = (self.sugar[i] + di).max(self.sugar[k] + dk);
            self.pairs.push(Pair { i, j: k, lcm, sugar });
        }
    }

    fn pop_pair(&mut self) -> Option<Pair> {
        let order = self.order;
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.sugar
                    .cmp(&b.sugar)
                    .then_with(|| order.cmp(&a.lcm.0, &b.lcm.0))
                    .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)))
            })
            .map(|(idx, _)| idx)?;
        Some(self.pairs.swap_remove(best))
    }

    fn spoly(&self, p: &Pair) -> SVec {
        let (gi, gj) = (&self.basis[p.i], &self.basis[p.j]);
        let mi = gi.lead().mono.quotient_of(&p.lcm).expect("lcm divisible");
        let mj = gj.lead().mono.quotient_of(&p.lcm).expect("lcm divisible");
        let zero = SVec::zero();
        let one = crate::poly::int(1);
        let a = zero.sub_mul(&-one.clone(), &mi, gi, self.order);
        a.sub_mul(&one, &mj, gj, self.order)
    }
}

/// Reduced Gröbner basis of the submodule generated by `gens` (rank `rank`).
pub(crate) fn buchberger(mut gens: Vec<SVec>, rank: usize, order: MonomialOrder) -> Vec<SVec> {
    gens.retain(|g| !g.is_zero());
    for g in &mut gens {
        g.make_monic();
    }
    // Input-order independence: process generators smallest first.
    gens.sort_by(|a, b| cmp_svec(order, a, b));
    gens.dedup();

    let mut st = State {
        order,
        rank,
        basis: Vec::new(),
        sugar: Vec::new(),
        pairs: Vec::new(),
    };
    for g in gens {
        let sugar = g.max_degree();
        let refs: Vec<&SVec> = st.basis.iter().collect();
        let mut r = reduce(g, &refs, order, true);
        if !r.is_zero() {
            r.make_monic();
            st.add(r, sugar);
        }
    }
    while let Some(p) = st.pop_pair() {
        let s = st.spoly(&p);
        let refs: Vec<&SVec> = st.basis.iter().collect();
        let mut r = reduce(s, &refs, order, true);
        if !r.is_zero() {
            r.make_monic();
            st.add(r, p.sugar);
        }
    }
    interreduce(st.basis, order)
}

fn interreduce(basis: Vec<SVec>, order: MonomialOrder) -> Vec<SVec> {
    let mut minimal: Vec<SVec> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lg = g.lead();
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            if i == j {
                return false;
            }
            let lh = h.lead();
            lh.comp == lg.comp && lh.mono.divides(&lg.mono) && (lh.mono != lg.mono || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<&SVec> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g).collect();
        let g = &minimal[i];
        let head = SVec {
            terms: vec![g.lead().clone()],
        };
        let tail = SVec {
            terms: g.terms[1..].to_vec(),
        };
        let tail = reduce(tail, &others, order, true);
        let mut terms = head.terms;
        terms.extend(tail.terms);
        out.push(SVec { terms });
    }
    out.sort_by(|a, b| cmp_svec(order, a, b));
    out
}

pub(crate) fn cmp_svec(order: MonomialOrder, a: &SVec, b: &SVec) -> std::cmp::Ordering {
    for (x, y) in a.terms.iter().zip(&b.terms) {
        let c = cmp_terms(order, x, y).then_with(|| x.coeff.cmp(&y.coeff));
        if c != std::cmp::Ordering::Equal {
            return c;
        }
    }
    a.terms.len().cmp(&b.terms.len())
}

/// Checks the Buchberger criterion: every S-pair reduces to zero.
pub(crate) fn satisfies_buchberger_criterion(basis: &[SVec], order: MonomialOrder) -> bool {
    let monic: Vec<SVec> = basis
        .iter()
        .map(|g| {
            let mut g = g.clone();
            g.make_monic();
            g
        })
        .collect();
    let refs: Vec<&SVec> = monic.iter().collect();
    for i in 0..monic.len() {
        for j in i + 1..monic.len() {
            let (li, lj) = (monic[i].lead(), monic[j].lead());
            if li.comp != lj.comp {
                continue;
            }
            let lcm = li.mono.lcm(&lj.mono);
            let mi = li.mono.quotient_of(&lcm).unwrap();
            let mj = lj.mono.quotient_of(&lcm).unwrap();
            let one = crate::poly::int(1);
            let s = SVec::zero()
                .sub_mul(&-one.clone(), &mi, &monic[i], order)
                .sub_mul(&one, &mj, &monic[j], order);
            if !reduce(s, &refs, order, true).is_zero() {
                return false;
            }
        }
    }
    true
}
