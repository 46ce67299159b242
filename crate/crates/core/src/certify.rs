//! Moving connective group-ring results to the other backends, so that a
//! result computed with `𝔠` inverted can be checked to lie over `Z[𝔠]`.
//!
//! In the group-ring model `e^{-e_j} = 1 - 𝔠x_j` with `x_j = x_{e_j}`, so
//! `e^λ = Π_j (1 - 𝔠x_j)^{-λ_j}` and every `x_j` arrives with one factor of
//! `𝔠`. A term `𝔠^m e^λ` therefore only produces `𝔠^{m+b} x^b`, which makes
//! the `𝔠 = 0` part a finite computation.

use serde::Serialize;

use crate::fga::{Backend, Ring};
use crate::formal_group::Series;
use crate::loc::Loc;
use crate::poly::{lattice_degree, Exp, Poly, VAR_C, ZERO_EXP};

/// `(1 - 𝔠x_j)^n` through `x_j`-degree `degree`.
fn binomial_factor(j: usize, n: i32, degree: u32) -> Poly {
    let mut out = Poly::zero();
    let mut coeff: i128 = 1;
    for k in 0..=degree as i128 {
        if k > 0 {
            // C(n, k)(-1)^k, valid for negative n too
            coeff = coeff * -(n as i128 - k + 1) / k;
        }
        if coeff == 0 {
            break;
        }
        let mut e: Exp = ZERO_EXP;
        e[j] = k as i16;
        e[VAR_C] = k as i16;
        out.add_term(e, coeff);
    }
    out
}

/// A connective group-ring element as a polynomial in `x_j` and `𝔠`
/// through `x`-degree `degree`.
pub fn to_x_variables(ring: &Ring, f: &Series, degree: u32) -> Poly {
    assert_eq!(ring.backend(), Backend::Connective);
    let d = ring.dim();
    let mut out = Poly::zero();
    for (e, &c) in f.poly.terms() {
        let mut base: Exp = ZERO_EXP;
        base[VAR_C] = e[VAR_C];
        let mut t = Poly::monomial(base, c);
        for j in 0..d {
            if e[j] != 0 {
                t = t.mul_trunc(&binomial_factor(j, -(e[j] as i32), degree), Some(degree as i32));
            }
        }
        out = &out + &t;
    }
    out
}

fn min_c_power(p: &Poly) -> i16 {
    p.terms().map(|(e, _)| e[VAR_C]).min().unwrap_or(0)
}

/// The `𝔠 = 0` specialization in the additive ring (`x_j ↦ t_j`), or
/// `None` if a negative power of `𝔠` survives.
pub fn to_additive(ring: &Ring, f: &Series) -> Option<Poly> {
    let depth = (-min_c_power(&f.poly)).max(0) as u32;
    let p = to_x_variables(ring, f, depth);
    if min_c_power(&p) < 0 {
        return None;
    }
    Some(p.eval_var(VAR_C, 0))
}

/// The truncated series over `Z[𝔠]` through degree `prec`, or `None` if a
/// negative power of `𝔠` survives.
pub fn to_series(ring: &Ring, f: &Series, prec: u32) -> Option<Poly> {
    let p = to_x_variables(ring, f, prec);
    if min_c_power(&p) < 0 {
        return None;
    }
    Some(p)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub additive: bool,
    pub multiplicative: bool,
    pub series: bool,
}

impl Certificate {
    pub fn ok(&self) -> bool {
        self.additive && self.multiplicative && self.series
    }
}

/// The same computation carried out on four backends.
pub struct Backends<'a> {
    pub connective: &'a Ring,
    pub additive: &'a Ring,
    pub multiplicative: &'a Ring,
    pub series: &'a Ring,
}

impl Backends<'_> {
    /// Checks that the generic value lies over `Z[𝔠]` and specializes to
    /// the other three values.
    pub fn certify(&self, generic: &Loc, add: &Loc, mult: &Loc, ser: &Loc) -> Certificate {
        let (Some(g), Some(a), Some(m), Some(s)) = (
            self.connective.in_s(generic),
            self.additive.in_s(add),
            self.multiplicative.in_s(mult),
            self.series.in_s(ser),
        ) else {
            return Certificate::default();
        };
        let additive = to_additive(self.connective, &g).is_some_and(|p| p == a.poly);
        let multiplicative = self.connective.specialize_c(&g, 1).poly == m.poly;
        let series = s.prec != 0
            && to_series(self.connective, &g, s.prec).is_some_and(|p| {
                let p = p.truncate(s.prec as i32);
                p == s.poly.truncate(s.prec as i32)
            });
        Certificate { additive, multiplicative, series }
    }
}

/// Lowest degree in which two truncated series differ.
pub fn first_difference(a: &Poly, b: &Poly) -> Option<i32> {
    (a - b).terms().map(|(e, _)| lattice_degree(e)).min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fga::{lvec, Torus};
    use crate::formal_group::FormalGroupLaw;
    use crate::root_system::RootSystem;
    use std::sync::Arc;

    #[test]
    fn x_of_a_root_goes_to_its_linear_form() {
        let rs = Arc::new(RootSystem::from_type("A2").unwrap());
        let conn = Ring::connective(rs.clone(), Torus::Small);
        let add = Ring::additive(rs.clone(), Torus::Small);
        for mu in [lvec(&[1, 0]), lvec(&[1, 1]), lvec(&[-1, 2])] {
            assert_eq!(to_additive(&conn, &conn.x(&mu)), Some(add.x(&mu).poly));
        }
        // 1/𝔠 is not integral
        let cinv = conn.make(Poly::var_pow(VAR_C, -1), crate::formal_group::INF);
        assert_eq!(to_additive(&conn, &cinv), None);
    }

    #[test]
    fn series_agrees_with_the_truncated_law() {
        let rs = Arc::new(RootSystem::from_type("A2").unwrap());
        let conn = Ring::connective(rs.clone(), Torus::Small);
        let ser = Ring::series(rs.clone(), Torus::Small, FormalGroupLaw::connective(), 6);
        for mu in [lvec(&[1, 1]), lvec(&[-1, 0]), lvec(&[2, -1])] {
            let p = to_series(&conn, &conn.x(&mu), 6).unwrap();
            assert_eq!(p, ser.x(&mu).poly, "{mu:?}");
        }
    }
}
