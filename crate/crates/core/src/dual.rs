//! Window-limited duals `Q*_{W_a}`: elements `Π c_w f_w` with `c_w` known for
//! all `ℓ(w) ≤ window`, the two Hecke actions, the characteristic map and
//! the GKM verifiers.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fada::{Expansion, Fada, TElem};
use crate::fga::Torus;
use crate::formal_group::Series;
use crate::loc::Loc;
use crate::poly::LAT;
use crate::root_system::{AffElem, LVec, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dual {
    pub window: u32,
    pub coeffs: BTreeMap<AffElem, Loc>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct GkmReport {
    pub checked: usize,
    pub passed: usize,
    pub failed: Vec<String>,
    pub skipped: Vec<String>,
}

impl GkmReport {
    pub fn ok(&self) -> bool {
        self.failed.is_empty()
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if ok {
            self.passed += 1;
        } else {
            self.failed.push(what());
        }
    }
}

fn binomial(n: u32, k: u32) -> i128 {
    let mut r: i128 = 1;
    for i in 0..k as i128 {
        r = r * (n as i128 - i) / (i + 1);
    }
    r
}

fn lvec_of(v: &Vector, n: usize) -> LVec {
    let mut out = [0; LAT];
    out[..n].copy_from_slice(&v[..n]);
    out
}

impl Fada {
    fn max_length(&self, z: &TElem) -> u32 {
        z.terms.keys().map(|w| self.rs().length(w)).max().unwrap_or(0)
    }

    pub fn dual_zero(&self, window: u32) -> Dual {
        Dual { window, coeffs: BTreeMap::new() }
    }

    /// `f_w`.
    pub fn dual_delta(&self, w: &AffElem, window: u32) -> Dual {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(*w, self.ring().loc_one());
        Dual { window, coeffs }
    }

    /// `𝟏 = Π f_w`.
    pub fn dual_unit(&self, window: u32) -> Dual {
        let one = self.ring().loc_one();
        let coeffs = self.rs().elements_up_to(window).into_iter().map(|w| (w, one.clone())).collect();
        Dual { window, coeffs }
    }

    pub fn dual_coeff(&self, f: &Dual, w: &AffElem) -> Result<Loc> {
        let l = self.rs().length(w);
        if l > f.window {
            return Err(Error::WindowExceeded { needed: l, window: f.window });
        }
        Ok(f.coeffs.get(w).cloned().unwrap_or_else(|| self.ring().loc_zero()))
    }

    fn dual_from_fn(&self, window: u32, mut g: impl FnMut(&AffElem) -> Result<Loc>) -> Result<Dual> {
        let mut coeffs = BTreeMap::new();
        for w in self.rs().elements_up_to(window) {
            let c = g(&w)?;
            if !self.ring().lis_zero(&c) {
                coeffs.insert(w, c);
            }
        }
        Ok(Dual { window, coeffs })
    }

    /// `f(Σ p_v η_v) = Σ p_v c_v`.
    pub fn evaluate(&self, f: &Dual, z: &TElem) -> Result<Loc> {
        let r = self.ring();
        let mut acc = r.loc_zero();
        for (v, p) in &z.terms {
            acc = r.ladd(&acc, &r.lmul(p, &self.dual_coeff(f, v)?));
        }
        Ok(acc)
    }

    pub fn dual_add(&self, a: &Dual, b: &Dual) -> Dual {
        let r = self.ring();
        let window = a.window.min(b.window);
        let mut coeffs = BTreeMap::new();
        for (w, c) in a.coeffs.iter().chain(b.coeffs.iter()) {
            if self.rs().length(w) > window {
                continue;
            }
            let s = match coeffs.remove(w) {
                Some(old) => r.ladd(&old, c),
                None => c.clone(),
            };
            if !r.lis_zero(&s) {
                coeffs.insert(*w, s);
            }
        }
        Dual { window, coeffs }
    }

    /// `a·f` for `a ∈ Q`.
    pub fn dual_scale(&self, a: &Loc, f: &Dual) -> Dual {
        let r = self.ring();
        let coeffs = f
            .coeffs
            .iter()
            .map(|(w, c)| (*w, r.lmul(a, c)))
            .filter(|(_, c)| !r.lis_zero(c))
            .collect();
        Dual { window: f.window, coeffs }
    }

    /// The pointwise product `f_w f_v = δ_{w,v} f_w`.
    pub fn dual_mul(&self, a: &Dual, b: &Dual) -> Dual {
        let r = self.ring();
        let window = a.window.min(b.window);
        let coeffs = a
            .coeffs
            .iter()
            .filter(|(w, _)| self.rs().length(w) <= window)
            .filter_map(|(w, c)| b.coeffs.get(w).map(|d| (*w, r.lmul(c, d))))
            .filter(|(_, c)| !r.lis_zero(c))
            .collect();
        Dual { window, coeffs }
    }

    pub fn dual_eq(&self, a: &Dual, b: &Dual) -> bool {
        let r = self.ring();
        let window = a.window.min(b.window);
        let zero = r.loc_zero();
        a.coeffs.keys().chain(b.coeffs.keys()).filter(|w| self.rs().length(w) <= window).all(|w| {
            r.leq(a.coeffs.get(w).unwrap_or(&zero), b.coeffs.get(w).unwrap_or(&zero))
        })
    }

    /// `X*_{I_w} = Π_v b_{v,I_w} f_v`, read from a `b` table.
    pub fn dual_x(&self, w: &AffElem, table: &Expansion) -> Dual {
        let coeffs = table
            .rows
            .iter()
            .filter_map(|(v, row)| row.get(w).map(|b| (*v, self.ring().loc(b.clone()))))
            .collect();
        Dual { window: table.window, coeffs }
    }

    /// `(z • f)(η_y) = f(η_y z) = Σ_w y(c_w) f(η_{yw})`; window shrinks by
    /// the length of `z`.
    pub fn bullet(&self, z: &TElem, f: &Dual) -> Result<Dual> {
        let k = self.max_length(z);
        let window = f.window.checked_sub(k).ok_or(Error::WindowExceeded { needed: k, window: f.window })?;
        let r = self.ring();
        self.dual_from_fn(window, |y| {
            let mut acc = r.loc_zero();
            for (w, c) in &z.terms {
                let v = self.dual_coeff(f, &self.rs().mul(y, w))?;
                acc = r.ladd(&acc, &r.lmul(&r.lact(y, c), &v));
            }
            Ok(acc)
        })
    }

    /// `aη_v ⊙ bf_w = a·v(b) f_{vw}`; coefficient at `y` is
    /// `Σ_v c_v v(f_{v^{-1}y})`.
    pub fn odot(&self, z: &TElem, f: &Dual) -> Result<Dual> {
        let k = self.max_length(z);
        let window = f.window.checked_sub(k).ok_or(Error::WindowExceeded { needed: k, window: f.window })?;
        let r = self.ring();
        self.dual_from_fn(window, |y| {
            let mut acc = r.loc_zero();
            for (v, c) in &z.terms {
                let src = self.rs().mul(&self.rs().inv(v), y);
                let b = self.dual_coeff(f, &src)?;
                acc = r.ladd(&acc, &r.lmul(c, &r.lact(v, &b)));
            }
            Ok(acc)
        })
    }

    /// `c(u) = u • 𝟏 = Π w(u) f_w`.
    pub fn characteristic(&self, u: &Loc, window: u32) -> Result<Dual> {
        let r = self.ring();
        self.dual_from_fn(window, |w| Ok(r.lact(w, u)))
    }

    /// `φ(a ⊗ b) = Π a·w(b) f_w`.
    pub fn phi(&self, a: &Loc, b: &Loc, window: u32) -> Result<Dual> {
        let r = self.ring();
        self.dual_from_fn(window, |w| Ok(r.lmul(a, &r.lact(w, b))))
    }

    /// `X_i` acting on `Q`: `(f - s_i f)/x_{γ_i}`.
    pub fn demazure_on(&self, i: usize, f: &Loc) -> Loc {
        self.apply(&self.demazure(i), f)
    }

    fn coeffs_in_s(&self, f: &Dual, report: &mut GkmReport) -> Option<BTreeMap<AffElem, Series>> {
        let mut out = BTreeMap::new();
        for (w, c) in &f.coeffs {
            match self.ring().in_s(c) {
                Some(s) => {
                    out.insert(*w, s);
                }
                None => {
                    report.checked += 1;
                    report.failed.push(format!("coefficient at {:?} is not in S", self.rs().reduced_word(w)));
                }
            }
        }
        if report.failed.is_empty() {
            Some(out)
        } else {
            None
        }
    }

    fn gkm_small(&self, f: &Dual, max_power: u32, with_reflection: bool) -> Result<GkmReport> {
        if self.ring().torus() != Torus::Small {
            return Err(Error::NotApplicable("small-torus GKM condition on a big-torus dual".into()));
        }
        let mut report = GkmReport::default();
        let coeffs = match self.coeffs_in_s(f, &mut report) {
            Some(c) => c,
            None => return Ok(report),
        };
        let r = self.ring();
        let rs = self.rs();
        let n = rs.rank();
        let zero = r.zero();
        let c = |w: &AffElem| -> Option<&Series> {
            if rs.length(w) > f.window {
                None
            } else {
                Some(coeffs.get(w).unwrap_or(&zero))
            }
        };
        let mut roots: Vec<Vector> = rs.positive_roots().to_vec();
        roots.extend(rs.positive_roots().iter().map(crate::root_system::negate));
        for w in rs.elements_up_to(f.window) {
            for alpha in &roots {
                let t = rs.translation(rs.coroot_of(alpha));
                let beta = lvec_of(alpha, n);
                let sw = rs.mul(&rs.finite(rs.w_reflection(alpha)), &w);
                for d in 1..=max_power {
                    let label = |kind: &str| format!("{kind} alpha={:?} w={:?} d={d}", &alpha[..n], rs.reduced_word(&w));
                    // Σ_j (-1)^j C(d, j) c_{t^j w}
                    let mut val = Some(r.zero());
                    let mut tj = w;
                    for j in 0..=d {
                        val = match (val, c(&tj)) {
                            (Some(acc), Some(cj)) => {
                                let s = if j % 2 == 0 { binomial(d, j) } else { -binomial(d, j) };
                                Some(r.add(&acc, &r.mul(&r.scalar(crate::poly::Poly::constant(s)), cj)))
                            }
                            _ => None,
                        };
                        tj = rs.mul(&t, &tj);
                    }
                    match val {
                        None => report.skipped.push(label("translation")),
                        Some(v) => {
                            let ok = r.divides(&v, &beta, d)?.is_some();
                            report.record(ok, || label("translation"));
                        }
                    }
                    if !with_reflection {
                        continue;
                    }
                    let mut val = Some(r.zero());
                    let (mut tw, mut tsw) = (w, sw);
                    for j in 0..d {
                        val = match (val, c(&tw), c(&tsw)) {
                            (Some(acc), Some(a), Some(b)) => {
                                let s = if j % 2 == 0 { binomial(d - 1, j) } else { -binomial(d - 1, j) };
                                let diff = r.sub(a, b);
                                Some(r.add(&acc, &r.mul(&r.scalar(crate::poly::Poly::constant(s)), &diff)))
                            }
                            _ => None,
                        };
                        tw = rs.mul(&t, &tw);
                        tsw = rs.mul(&t, &tsw);
                    }
                    match val {
                        None => report.skipped.push(label("reflection")),
                        Some(v) => {
                            let ok = r.divides(&v, &beta, d)?.is_some();
                            report.record(ok, || label("reflection"));
                        }
                    }
                }
            }
        }
        Ok(report)
    }

    /// The small-torus GKM condition up to `x_α^D`.
    pub fn gkm_check_small(&self, f: &Dual, max_power: u32) -> Result<GkmReport> {
        self.gkm_small(f, max_power, true)
    }

    /// The small-torus Grassmannian condition (translation differences only).
    pub fn grassmannian_check(&self, f: &Dual, max_power: u32) -> Result<GkmReport> {
        self.gkm_small(f, max_power, false)
    }

    /// The big-torus GKM condition: `c_w - c_{s_β w} ∈ x_β Ŝ` for all real
    /// affine roots `β` with both elements in the window.
    pub fn gkm_check_big(&self, f: &Dual) -> Result<GkmReport> {
        if self.ring().torus() != Torus::Big {
            return Err(Error::NotApplicable("big-torus GKM condition on a small-torus dual".into()));
        }
        let mut report = GkmReport::default();
        let coeffs = match self.coeffs_in_s(f, &mut report) {
            Some(c) => c,
            None => return Ok(report),
        };
        let r = self.ring();
        let rs = self.rs();
        let n = rs.rank();
        let reflections: BTreeMap<u32, Vector> =
            rs.positive_roots().iter().map(|a| (rs.w_reflection(a), *a)).collect();
        let elems = rs.elements_up_to(f.window);
        let zero = r.zero();
        for (i, w) in elems.iter().enumerate() {
            for w2 in &elems[i + 1..] {
                let q = rs.mul(w2, &rs.inv(w));
                let Some(alpha) = reflections.get(&q.w) else { continue };
                let cor = rs.coroot_of(alpha);
                // q = s_α t_{kα^∨}
                let k = (0..n).find(|&j| cor[j] != 0).map(|j| q.lam[j] / cor[j]).unwrap_or(0);
                if crate::root_system::scale(&cor, k) != q.lam {
                    continue;
                }
                let mut beta = lvec_of(alpha, n);
                beta[n] = k;
                let diff = r.sub(coeffs.get(w).unwrap_or(&zero), coeffs.get(w2).unwrap_or(&zero));
                let ok = r.divides(&diff, &beta, 1)?.is_some();
                report.record(ok, || {
                    format!("beta=({:?}, {k}) w={:?} w'={:?}", &alpha[..n], rs.reduced_word(w), rs.reduced_word(w2))
                });
            }
        }
        Ok(report)
    }

    /// `pr*`: `f_{t_λ} ↦ Σ_{v ∈ W} f_{t_λ v}`.
    pub fn pr_star(&self, g: &BTreeMap<Vector, Loc>, window: u32) -> Dual {
        let rs = self.rs();
        let mut coeffs = BTreeMap::new();
        for (lam, c) in g {
            for v in rs.finite_elements() {
                let y = rs.mul(&rs.translation(*lam), &rs.finite(v));
                if rs.length(&y) <= window && !self.ring().lis_zero(c) {
                    coeffs.insert(y, c.clone());
                }
            }
        }
        Dual { window, coeffs }
    }

    /// `pr*` on the dual side: restriction to translations.
    pub fn restrict_to_translations(&self, f: &Dual) -> BTreeMap<Vector, Loc> {
        f.coeffs.iter().filter(|(w, _)| w.w == 0).map(|(w, c)| (w.lam, c.clone())).collect()
    }

    /// `η_v • f = f` for all `v ∈ W`, i.e. `f(η_{yv}) = f(η_y)`, checked on
    /// the window.
    pub fn is_w_invariant(&self, f: &Dual) -> bool {
        let rs = self.rs();
        (1..=rs.rank()).all(|i| match self.bullet(&self.eta(&rs.simple(i)), f) {
            Ok(g) => self.dual_eq(&g, &Dual { window: g.window, coeffs: f.coeffs.clone() }),
            Err(_) => false,
        })
    }

    pub fn dual_to_json(&self, f: &Dual) -> serde_json::Value {
        let rs = self.rs();
        let mut keys: Vec<&AffElem> = f.coeffs.keys().collect();
        keys.sort_by_key(|w| (rs.length(w), rs.reduced_word(w)));
        let terms: Vec<serde_json::Value> = keys
            .into_iter()
            .map(|w| serde_json::json!({ "f": rs.reduced_word(w), "coefficient": self.ring().loc_to_json(&f.coeffs[w]) }))
            .collect();
        serde_json::json!({ "window": f.window, "terms": terms })
    }
}
