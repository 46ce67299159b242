//! Localizations `Q = S[1/x_α]` and `Q̂ = Ŝ[1/x_α]`.
//!
//! A [`Loc`] is a numerator over a product of `x_β` for positive roots `β`.
//! Every operation cancels denominators that divide the numerator, so on the
//! exact backends (unique factorization domains in which the `x_β` are
//! pairwise non-associate primes) the representation is canonical.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::fga::{Ring, Torus};
use crate::formal_group::{Series, INF};
use crate::poly::Poly;
use crate::root_system::{AffElem, LVec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Loc {
    pub num: Series,
    pub den: BTreeMap<LVec, u32>,
}

impl Loc {
    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn den_degree(&self) -> u32 {
        self.den.values().sum()
    }
}

fn neg_vec(v: &LVec) -> LVec {
    let mut out = *v;
    for x in out.iter_mut() {
        *x = -*x;
    }
    out
}

impl Ring {
    pub fn loc(&self, f: Series) -> Loc {
        Loc { num: f, den: BTreeMap::new() }
    }

    pub fn loc_zero(&self) -> Loc {
        self.loc(self.zero())
    }

    pub fn loc_one(&self) -> Loc {
        self.loc(self.one())
    }

    /// `1 / x_β` for a root `β`.
    pub fn inv_x(&self, beta: &LVec) -> Loc {
        let (pos, num) = if self.is_positive_root(beta) {
            (*beta, self.one())
        } else {
            let p = neg_vec(beta);
            (p, self.unit_inv(&p))
        };
        let mut den = BTreeMap::new();
        den.insert(pos, 1);
        Loc { num, den }
    }

    /// Cancels every denominator factor dividing the numerator.
    pub fn reduce(&self, mut l: Loc) -> Loc {
        if l.num.poly.is_zero() {
            let lost = l.den_degree();
            l.den.clear();
            if l.num.prec != INF {
                l.num.prec = l.num.prec.saturating_sub(lost);
            }
            return l;
        }
        let keys: Vec<LVec> = l.den.keys().copied().collect();
        for beta in keys {
            let mut m = l.den[&beta];
            while m > 0 {
                match self.divide_x(&l.num, &beta) {
                    Some(q) => {
                        l.num = q;
                        m -= 1;
                    }
                    None => break,
                }
            }
            if m == 0 {
                l.den.remove(&beta);
            } else {
                l.den.insert(beta, m);
            }
        }
        l
    }

    fn times_x_powers(&self, f: &Series, powers: &BTreeMap<LVec, u32>) -> Series {
        let mut out = f.clone();
        for (beta, &m) in powers {
            if m > 0 {
                out = self.mul(&out, &self.pow(&self.x(beta), m));
            }
        }
        out
    }

    pub fn lmul(&self, a: &Loc, b: &Loc) -> Loc {
        let num = self.mul(&a.num, &b.num);
        if num.poly.is_zero() && self.is_exact() {
            return self.loc_zero();
        }
        let mut den = a.den.clone();
        for (k, m) in &b.den {
            *den.entry(*k).or_insert(0) += m;
        }
        self.reduce(Loc { num, den })
    }

    /// Multiplies by an element of `S`.
    pub fn lscale(&self, f: &Series, a: &Loc) -> Loc {
        self.reduce(Loc { num: self.mul(f, &a.num), den: a.den.clone() })
    }

    fn common(&self, a: &Loc, b: &Loc) -> (Series, Series, BTreeMap<LVec, u32>) {
        let mut den = a.den.clone();
        for (k, &m) in &b.den {
            let e = den.entry(*k).or_insert(0);
            *e = (*e).max(m);
        }
        let missing = |l: &Loc| -> BTreeMap<LVec, u32> {
            den.iter().map(|(k, &m)| (*k, m - l.den.get(k).copied().unwrap_or(0))).collect()
        };
        let na = self.times_x_powers(&a.num, &missing(a));
        let nb = self.times_x_powers(&b.num, &missing(b));
        (na, nb, den)
    }

    pub fn ladd(&self, a: &Loc, b: &Loc) -> Loc {
        if self.is_exact() {
            if a.num.poly.is_zero() {
                return b.clone();
            }
            if b.num.poly.is_zero() {
                return a.clone();
            }
            if a.den == b.den {
                return self.reduce(Loc { num: self.add(&a.num, &b.num), den: a.den.clone() });
            }
        }
        let (na, nb, den) = self.common(a, b);
        self.reduce(Loc { num: self.add(&na, &nb), den })
    }

    pub fn lneg(&self, a: &Loc) -> Loc {
        Loc { num: self.neg(&a.num), den: a.den.clone() }
    }

    pub fn lsub(&self, a: &Loc, b: &Loc) -> Loc {
        self.ladd(a, &self.lneg(b))
    }

    pub fn lis_zero(&self, a: &Loc) -> bool {
        a.num.poly.is_zero()
    }

    /// Equality; on the series backend, agreement through the available
    /// precision.
    pub fn leq(&self, a: &Loc, b: &Loc) -> bool {
        if self.is_exact() {
            return a == b;
        }
        let (na, nb, _) = self.common(a, b);
        let p = na.prec.min(nb.prec);
        na.poly.truncate(p as i32) == nb.poly.truncate(p as i32)
    }

    /// `x(a)` for `x ∈ W_a`.
    pub fn lact(&self, x: &AffElem, a: &Loc) -> Loc {
        let mut num = self.act(x, &a.num);
        let mut den = BTreeMap::new();
        for (beta, &m) in &a.den {
            let g = self.act_vec(x, beta);
            if self.is_positive_root(&g) {
                *den.entry(g).or_insert(0) += m;
            } else {
                let p = neg_vec(&g);
                num = self.mul(&num, &self.pow(&self.unit_inv(&p), m));
                *den.entry(p).or_insert(0) += m;
            }
        }
        Loc { num, den }
    }

    /// The element of `S` represented by `a`, if its denominator cancels.
    pub fn in_s(&self, a: &Loc) -> Option<Series> {
        if a.den.is_empty() {
            Some(a.num.clone())
        } else {
            None
        }
    }

    /// `𝔭` on localized elements; `self` is the big-torus ring and `small`
    /// the target.
    pub fn project_loc(&self, small: &Ring, a: &Loc) -> Loc {
        assert_eq!(self.torus(), Torus::Big);
        let n = self.root_system().rank();
        let mut out = small.loc(self.project_delta(&a.num));
        for (beta, &m) in &a.den {
            let mut b = *beta;
            b[n] = 0;
            for _ in 0..m {
                out = small.lmul(&out, &small.inv_x(&b));
            }
        }
        out
    }

    pub fn lspecialize_c(&self, a: &Loc, value: i128) -> Option<Series> {
        self.in_s(a).map(|f| self.specialize_c(&f, value))
    }

    pub fn loc_to_json(&self, a: &Loc) -> Value {
        let mut v = self.to_json(&a.num);
        if !a.den.is_empty() {
            let d = self.dim();
            let den: Vec<Value> = a.den.iter().map(|(k, m)| json!({ "root": &k[..d], "power": m })).collect();
            v["denominator"] = json!(den);
        }
        v
    }

    pub fn loc_from_poly(&self, p: Poly) -> Loc {
        self.loc(self.make(p, self.precision()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fga::lvec;
    use crate::formal_group::FormalGroupLaw;
    use crate::root_system::RootSystem;
    use std::sync::Arc;

    fn rings() -> Vec<Ring> {
        let rs = Arc::new(RootSystem::from_type("A1").unwrap());
        vec![
            Ring::additive(rs.clone(), Torus::Small),
            Ring::multiplicative(rs.clone(), Torus::Small),
            Ring::connective(rs.clone(), Torus::Small),
            Ring::new(rs.clone(), Torus::Small, FormalGroupLaw::hyperbolic(8)),
        ]
    }

    #[test]
    fn kappa_is_polynomial() {
        for ring in rings() {
            let a = lvec(&[1]);
            let k = ring.ladd(&ring.inv_x(&a), &ring.inv_x(&lvec(&[-1])));
            let k = ring.in_s(&k).expect("κ_α ∈ S");
            match ring.backend() {
                crate::fga::Backend::Additive => assert!(k.poly.is_zero()),
                crate::fga::Backend::Multiplicative => assert_eq!(k.poly, Poly::one()),
                crate::fga::Backend::Connective => assert_eq!(k, ring.c_param()),
                crate::fga::Backend::Series => {
                    // i(x) = -x/(1 - cx), so 1/x + 1/i(x) = c with no `a` terms
                    assert_eq!(k.poly, ring.c_param().poly);
                    assert!(k.prec >= 6);
                }
            }
        }
    }

    #[test]
    fn fractions_cancel() {
        for ring in rings() {
            let a = lvec(&[1]);
            let x = ring.loc(ring.x(&a));
            let one = ring.lmul(&x, &ring.inv_x(&a));
            assert!(ring.leq(&one, &ring.loc_one()));
            let z = ring.lsub(&ring.inv_x(&a), &ring.inv_x(&a));
            assert!(ring.lis_zero(&z));
        }
    }
}
