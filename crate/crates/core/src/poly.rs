//! Sparse multivariate Laurent polynomials over the integers.
//!
//! One representation serves every backend. The first [`LAT`] variable slots
//! hold lattice coordinates (linear symbols, group-ring characters or series
//! variables depending on the backend) and the last two slots hold the formal
//! parameters `c` and `a`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Largest supported finite rank.
pub const MAX_RANK: usize = 8;
/// Lattice slots: finite rank plus one slot for the null root.
pub const LAT: usize = MAX_RANK + 1;
/// Slot of the parameter `c`.
pub const VAR_C: usize = LAT;
/// Slot of the parameter `a` (hyperbolic law).
pub const VAR_A: usize = LAT + 1;
/// Total number of variable slots.
pub const NVARS: usize = LAT + 2;

pub type Exp = [i16; NVARS];

pub const ZERO_EXP: Exp = [0; NVARS];

fn checked_add(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("integer coefficient overflow")
}

fn checked_mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("integer coefficient overflow")
}

/// Total degree of the lattice part of an exponent.
pub fn lattice_degree(e: &Exp) -> i32 {
    e[..LAT].iter().map(|&x| x as i32).sum()
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Exp, i128>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i128) -> Self {
        Self::monomial(ZERO_EXP, c)
    }

    pub fn monomial(e: Exp, c: i128) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(e, c);
        }
        Poly { terms }
    }

    /// The single variable in slot `i` raised to `power`.
    pub fn var_pow(i: usize, power: i16) -> Self {
        let mut e = ZERO_EXP;
        e[i] = power;
        Self::monomial(e, 1)
    }

    pub fn var(i: usize) -> Self {
        Self::var_pow(i, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (Exp, i128)>>(it: I) -> Self {
        let mut p = Poly::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &i128)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Exp, i128)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, e: &Exp) -> i128 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> i128 {
        self.coeff(&ZERO_EXP)
    }

    /// `Some(c)` when the polynomial is the integer constant `c`.
    pub fn as_constant(&self) -> Option<i128> {
        match self.terms.len() {
            0 => Some(0),
            1 => self.terms.get(&ZERO_EXP).copied(),
            _ => None,
        }
    }

    /// `Some((e, c))` when the polynomial is a single term.
    pub fn as_monomial(&self) -> Option<(Exp, i128)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, *c))
        } else {
            None
        }
    }

    pub fn add_term(&mut self, e: Exp, c: i128) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(e).or_insert(0);
        *entry = checked_add(*entry, c);
        if *entry == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn add_assign_ref(&mut self, other: &Poly) {
        for (e, c) in &other.terms {
            self.add_term(*e, *c);
        }
    }

    pub fn sub_assign_ref(&mut self, other: &Poly) {
        for (e, c) in &other.terms {
            self.add_term(*e, -*c);
        }
    }

    pub fn scale(&self, k: i128) -> Poly {
        if k == 0 {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, checked_mul(*c, k))).collect(),
        }
    }

    /// Multiplies by the monomial `x^e`.
    pub fn shift(&self, e: &Exp) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(f, c)| {
                    let mut g = *f;
                    for i in 0..NVARS {
                        g[i] += e[i];
                    }
                    (g, *c)
                })
                .collect(),
        }
    }

    /// Product keeping only terms whose lattice degree is at most `max_deg`.
    pub fn mul_trunc(&self, other: &Poly, max_deg: Option<i32>) -> Poly {
        let mut out: BTreeMap<Exp, i128> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            let d1 = lattice_degree(e1);
            for (e2, c2) in &other.terms {
                if let Some(m) = max_deg {
                    if d1 + lattice_degree(e2) > m {
                        continue;
                    }
                }
                let mut e = *e1;
                for i in 0..NVARS {
                    e[i] += e2[i];
                }
                let entry = out.entry(e).or_insert(0);
                *entry = checked_add(*entry, checked_mul(*c1, *c2));
            }
        }
        out.retain(|_, c| *c != 0);
        Poly { terms: out }
    }

    pub fn pow(&self, k: u32) -> Poly {
        self.pow_trunc(k, None)
    }

    pub fn pow_trunc(&self, k: u32, max_deg: Option<i32>) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = acc.mul_trunc(self, max_deg);
        }
        acc
    }

    /// Drops terms of lattice degree above `max_deg`.
    pub fn truncate(&self, max_deg: i32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| lattice_degree(e) <= max_deg)
                .map(|(e, c)| (*e, *c))
                .collect(),
        }
    }

    /// Lowest lattice degree among the terms (`None` for zero).
    pub fn valuation(&self) -> Option<i32> {
        self.terms.keys().map(lattice_degree).min()
    }

    pub fn max_lattice_degree(&self) -> Option<i32> {
        self.terms.keys().map(lattice_degree).max()
    }

    /// Minimum exponent of variable `i` among the terms.
    pub fn min_exp(&self, i: usize) -> Option<i16> {
        self.terms.keys().map(|e| e[i]).min()
    }

    /// Substitutes the integer `value` for the variable in slot `i`. Negative
    /// exponents are allowed only for `value = ±1`.
    pub fn eval_var(&self, i: usize, value: i128) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let k = e[i];
            let factor = if k >= 0 {
                value.checked_pow(k as u32).expect("integer coefficient overflow")
            } else {
                assert!(value == 1 || value == -1, "cannot invert {value}");
                value.pow((-k) as u32)
            };
            let mut f = *e;
            f[i] = 0;
            out.add_term(f, checked_mul(*c, factor));
        }
        out
    }

    /// Groups terms by the exponent of variable `i`; the keys of the result
    /// are exponents and the values have that variable removed.
    pub fn split_by_var(&self, i: usize) -> BTreeMap<i16, Poly> {
        let mut out: BTreeMap<i16, Poly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut f = *e;
            let k = f[i];
            f[i] = 0;
            out.entry(k).or_default().add_term(f, *c);
        }
        out
    }

    /// Keeps only terms whose exponents satisfy `pred`.
    pub fn filter<F: Fn(&Exp) -> bool>(&self, pred: F) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| pred(e))
                .map(|(e, c)| (*e, *c))
                .collect(),
        }
    }

    /// Applies a map on exponents, summing colliding terms.
    pub fn map_exps<F: Fn(&Exp) -> Exp>(&self, f: F) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            out.add_term(f(e), *c);
        }
        out
    }

    /// Substitutes polynomials for the lattice variables `0..k`; the other
    /// slots are carried along unchanged. Exponents in substituted slots must
    /// be nonnegative.
    pub fn substitute(&self, images: &[Poly], max_deg: Option<i32>) -> Poly {
        let k = images.len();
        let mut max_pow = vec![0i16; k];
        for e in self.terms.keys() {
            for j in 0..k {
                assert!(e[j] >= 0, "substitution into a negative exponent");
                max_pow[j] = max_pow[j].max(e[j]);
            }
        }
        let powers: Vec<Vec<Poly>> = (0..k)
            .map(|j| {
                let mut v = vec![Poly::one()];
                for p in 1..=max_pow[j] as usize {
                    let next = v[p - 1].mul_trunc(&images[j], max_deg);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let mut rest = *e;
            for slot in rest.iter_mut().take(k) {
                *slot = 0;
            }
            let mut term = Poly::monomial(rest, *c);
            for j in 0..k {
                if e[j] > 0 {
                    term = term.mul_trunc(&powers[j][e[j] as usize], max_deg);
                }
            }
            out.add_assign_ref(&term);
        }
        out
    }

    /// Formats the parameter-only polynomial in `c` and `a`.
    pub fn scalar_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        // highest total parameter degree first
        let mut terms: Vec<(&Exp, &i128)> = self.terms.iter().collect();
        terms.sort_by_key(|(e, _)| (-(e[VAR_C] as i32 + e[VAR_A] as i32), -(e[VAR_C] as i32)));
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let mut factors = Vec::new();
            for (slot, name) in [(VAR_C, "c"), (VAR_A, "a")] {
                match e[slot] {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    k => factors.push(format!("{name}^{k}")),
                }
            }
            let mag = c.abs();
            let body = if factors.is_empty() {
                mag.to_string()
            } else if mag == 1 {
                factors.join("*")
            } else {
                format!("{mag}*{}", factors.join("*"))
            };
            if i == 0 {
                if *c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if *c < 0 { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }

    /// Parses strings such as `"3*c^2*a - c^-1 + 5"`.
    pub fn parse_scalar(s: &str) -> Result<Poly, String> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err("empty scalar".into());
        }
        let mut out = Poly::zero();
        let bytes: Vec<char> = cleaned.chars().collect();
        let mut start = 0;
        let mut terms = Vec::new();
        for i in 1..=bytes.len() {
            let boundary = i == bytes.len()
                || ((bytes[i] == '+' || bytes[i] == '-') && bytes[i - 1] != '^');
            if boundary {
                terms.push(bytes[start..i].iter().collect::<String>());
                start = i;
            }
        }
        for t in terms {
            let (sign, body) = match t.chars().next() {
                Some('-') => (-1, &t[1..]),
                Some('+') => (1, &t[1..]),
                _ => (1, &t[..]),
            };
            if body.is_empty() {
                return Err(format!("dangling sign in {s:?}"));
            }
            let mut coeff: i128 = sign;
            let mut e = ZERO_EXP;
            for f in body.split('*') {
                let (base, power) = match f.split_once('^') {
                    Some((b, p)) => (
                        b,
                        p.parse::<i16>().map_err(|_| format!("bad exponent in {f:?}"))?,
                    ),
                    None => (f, 1),
                };
                match base {
                    "c" => e[VAR_C] += power,
                    "a" => e[VAR_A] += power,
                    num => {
                        let v: i128 = num.parse().map_err(|_| format!("bad factor {f:?}"))?;
                        if power < 0 {
                            return Err(format!("negative power of integer in {f:?}"));
                        }
                        coeff = checked_mul(coeff, v.pow(power as u32));
                    }
                }
            }
            out.add_term(e, coeff);
        }
        Ok(out)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (slot, k) in e.iter().enumerate() {
                if *k != 0 {
                    let name = match slot {
                        VAR_C => "c".to_string(),
                        VAR_A => "a".to_string(),
                        j => format!("v{j}"),
                    };
                    write!(f, "*{name}^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_trunc(rhs, None)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Poly {
        Poly::var(i)
    }

    #[test]
    fn arithmetic_cancels_to_canonical_zero() {
        let p = &x(0) + &x(1);
        let q = &(&p * &p) - &(&(&x(0) * &x(0)) + &(&x(1) * &x(1)));
        assert_eq!(q, (&x(0) * &x(1)).scale(2));
        assert!((&q - &q).is_zero());
    }

    #[test]
    fn truncated_products_drop_high_degree() {
        let p = &Poly::one() + &x(0);
        let sq = p.pow_trunc(3, Some(1));
        assert_eq!(sq, &Poly::one() + &x(0).scale(3));
    }

    #[test]
    fn scalar_strings_round_trip() {
        for s in ["3*c^2*a - c^-1 + 5", "-c", "0", "c^2 - 2*c + 1", "-7*a^3"] {
            let p = Poly::parse_scalar(s).unwrap();
            let back = Poly::parse_scalar(&p.scalar_string()).unwrap();
            assert_eq!(p, back, "{s}");
        }
        assert!(Poly::parse_scalar("2*q").is_err());
        assert_eq!(Poly::parse_scalar("c^2 - 2*c + 1").unwrap().scalar_string(), "c^2 - 2*c + 1");
    }

    #[test]
    fn substitution_matches_expansion() {
        // (v0 + v1)^2 with v0 -> v1, v1 -> -v0
        let p = (&x(0) + &x(1)).pow(2);
        let img = [x(1), x(0).scale(-1)];
        assert_eq!(p.substitute(&img, None), (&x(1) - &x(0)).pow(2));
    }

    #[test]
    fn eval_var_specializes_laurent_parameter() {
        let p = &Poly::var_pow(VAR_C, -1) + &Poly::var_pow(VAR_C, 2);
        assert_eq!(p.eval_var(VAR_C, 1), Poly::constant(2));
    }
}
