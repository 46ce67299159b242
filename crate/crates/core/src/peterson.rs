//! The maps `pr`, `k`, `k*`, the Peterson subalgebra `D_{Q^∨}` and its
//! structure constants.
//!
//! Elements of `Q_{Q^∨}` are [`TElem`]s supported on translations, so `k`
//! is the identity on representations.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dual::Dual;
use crate::error::{Error, Result};
use crate::fada::{Expansion, Fada, Family, TElem};
use crate::fga::Torus;
use crate::formal_group::Series;
use crate::loc::Loc;
use crate::root_system::{negate, AffElem, Vector};

#[derive(Clone, Debug)]
pub struct PetersonExpansion {
    pub u: AffElem,
    pub word: Vec<u8>,
    /// Coordinates of `k(𝔛_{I_u})` in the `X_{I_v}` basis.
    pub coeffs: BTreeMap<AffElem, Series>,
}

#[derive(Clone, Debug)]
pub struct StructureReport {
    /// `𝔡^{I_{w3}}_{I_u,I_v}` for `w3 ∈ W_a^-`.
    pub frak_d: BTreeMap<AffElem, Loc>,
    /// `Σ_{w2} c_{I_u,I_{w2}} d^{I_{w3}}_{I_{w2},I_v}`.
    pub rhs: BTreeMap<AffElem, Loc>,
    pub holds: bool,
}

/// `Δ(z)` as a map `(λ, μ) ↦ coefficient of η_{t_λ} ⊗ η_{t_μ}`.
pub type Tensor = BTreeMap<(Vector, Vector), Loc>;

pub struct Peterson {
    fada: Arc<Fada>,
    table: Expansion,
}

impl Peterson {
    /// Builds the `b` table up to `window`.
    pub fn new(fada: Arc<Fada>, window: u32) -> Result<Self> {
        if fada.ring().torus() != Torus::Small {
            return Err(Error::NotApplicable("the Peterson subalgebra lives on the small torus".into()));
        }
        let table = fada.eta_in_x_basis(window)?;
        Ok(Peterson { fada, table })
    }

    pub fn fada(&self) -> &Fada {
        &self.fada
    }

    pub fn table(&self) -> &Expansion {
        &self.table
    }

    /// `pr(cη_{t_λ w}) = cη_{t_λ}`.
    pub fn pr(&self, z: &TElem) -> TElem {
        let f = &self.fada;
        let rs = f.rs();
        let mut out = f.zero();
        for (w, c) in &z.terms {
            // w·t_μ = t_{w(μ)}·w
            let t = rs.translation(rs.w_coroot(w.w, &w.lam));
            out = f.add(&out, &f.scalar_eta(c.clone(), &t));
        }
        out
    }

    /// `k`: the inclusion `Q_{Q^∨} → Q_{W_a}`.
    pub fn k(&self, z: &TElem) -> Result<TElem> {
        if z.terms.keys().any(|w| w.w != 0) {
            return Err(Error::ShapeViolation("k is defined on translation-supported elements".into()));
        }
        Ok(z.clone())
    }

    /// `k*(f_{t_λ u}) = δ_{u,e} f_{t_λ}`.
    pub fn k_star(&self, f: &Dual) -> BTreeMap<Vector, Loc> {
        self.fada.restrict_to_translations(f)
    }

    /// `𝔛_{I_u} = pr(X_{I_u})`.
    pub fn frak_x(&self, u: &AffElem) -> TElem {
        self.pr(&self.fada.basis(Family::X, u))
    }

    /// The `b` table window needed to expand `k(𝔛_{I_u})`.
    pub fn required_window(&self, u: &AffElem) -> u32 {
        self.frak_x(u).terms.keys().map(|t| self.fada.rs().length(t)).max().unwrap_or(0)
    }

    /// `k(𝔛_{I_u}) = Σ_λ p_λ Σ_v b_{t_λ,I_v} X_{I_v}`, with the shape of the
    /// expansion asserted: coefficient 1 at `u`, 0 at other `v ∈ W_a^-`,
    /// all coefficients in `S`.
    pub fn expand(&self, u: &AffElem) -> Result<PetersonExpansion> {
        let f = &self.fada;
        let r = f.ring();
        let rs = f.rs();
        if !rs.is_minimal(u) {
            return Err(Error::NotMinimal);
        }
        let p = self.frak_x(u);
        let mut acc: BTreeMap<AffElem, Loc> = BTreeMap::new();
        for (t, c) in &p.terms {
            let l = rs.length(t);
            let row = self.table.rows.get(t).ok_or(Error::WindowExceeded { needed: l, window: self.table.window })?;
            for (v, b) in row {
                let term = r.lscale(b, c);
                let s = match acc.remove(v) {
                    Some(old) => r.ladd(&old, &term),
                    None => term,
                };
                if !r.lis_zero(&s) {
                    acc.insert(*v, s);
                }
            }
        }
        let mut coeffs = BTreeMap::new();
        for (v, c) in acc {
            let s = r.in_s(&c).ok_or_else(|| Error::DenominatorRemains {
                what: format!("c_{{{:?},{:?}}}", f.word_of(u), f.word_of(&v)),
                detail: format!("{:?}", c.den.keys().collect::<Vec<_>>()),
            })?;
            if rs.is_minimal(&v) {
                let expected = if v == *u { r.one() } else { r.zero() };
                let ok = if r.is_exact() { s == expected } else { r.leq(&r.loc(s.clone()), &r.loc(expected)) };
                if !ok {
                    return Err(Error::ShapeViolation(format!(
                        "coefficient at minimal {:?} in k(𝔛_{:?})",
                        f.word_of(&v),
                        f.word_of(u)
                    )));
                }
            }
            coeffs.insert(v, s);
        }
        if !coeffs.contains_key(u) {
            return Err(Error::ShapeViolation(format!("k(𝔛_{:?}) misses its leading term", f.word_of(u))));
        }
        Ok(PetersonExpansion { u: *u, word: f.word_of(u), coeffs })
    }

    /// `z x_μ = x_μ z` for every basis character `μ`.
    pub fn centralizer_check(&self, z: &TElem) -> bool {
        let f = &self.fada;
        let r = f.ring();
        (0..r.dim()).all(|j| {
            let mut e = [0; crate::poly::LAT];
            e[j] = 1;
            let x = f.scalar(r.loc(r.x(&e)));
            f.equal(&f.mul(z, &x), &f.mul(&x, z))
        })
    }

    /// The support criterion: only translations appear.
    pub fn supported_on_translations(&self, z: &TElem) -> bool {
        z.terms.keys().all(|w| w.w == 0)
    }

    /// Checks the identity `𝔡^{I_{w3}}_{I_u,I_v} = Σ_{w2}
    /// c_{I_u,I_{w2}} d^{I_{w3}}_{I_{w2},I_v}` for all `w3 ∈ W_a^-`.
    pub fn structure_constants(&self, u: &AffElem, v: &AffElem) -> Result<StructureReport> {
        let f = &self.fada;
        let r = f.ring();
        let rs = f.rs();
        let big = u32::MAX;
        let prod = f.mul(&self.frak_x(u), &self.frak_x(v));
        let frak_d: BTreeMap<AffElem, Loc> =
            f.coordinates(Family::X, &prod, big)?.into_iter().filter(|(w, _)| rs.is_minimal(w)).collect();
        let cu = self.expand(u)?;
        let xv = f.basis(Family::X, v);
        let mut rhs: BTreeMap<AffElem, Loc> = BTreeMap::new();
        for (w2, c) in &cu.coeffs {
            let d = f.coordinates(Family::X, &f.mul(&f.basis(Family::X, w2), &xv), big)?;
            for (w3, dv) in d {
                if !rs.is_minimal(&w3) {
                    continue;
                }
                let term = r.lscale(c, &dv);
                let s = match rhs.remove(&w3) {
                    Some(old) => r.ladd(&old, &term),
                    None => term,
                };
                if !r.lis_zero(&s) {
                    rhs.insert(w3, s);
                }
            }
        }
        let zero = r.loc_zero();
        let holds = frak_d
            .keys()
            .chain(rhs.keys())
            .all(|w| r.leq(frak_d.get(w).unwrap_or(&zero), rhs.get(w).unwrap_or(&zero)));
        Ok(StructureReport { frak_d, rhs, holds })
    }

    /// `Δ(Σ p_λ η_{t_λ}) = Σ p_λ η_{t_λ} ⊗ η_{t_λ}`.
    pub fn coproduct(&self, z: &TElem) -> Tensor {
        z.terms.iter().map(|(w, c)| ((w.lam, w.lam), c.clone())).collect()
    }

    /// Product in the tensor square; translations act trivially on the
    /// small torus, so coefficients multiply.
    pub fn tensor_mul(&self, a: &Tensor, b: &Tensor) -> Tensor {
        let r = self.fada.ring();
        let mut out: Tensor = BTreeMap::new();
        for ((l1, m1), c1) in a {
            for ((l2, m2), c2) in b {
                let key = (crate::root_system::add(l1, l2), crate::root_system::add(m1, m2));
                let term = r.lmul(c1, c2);
                let s = match out.remove(&key) {
                    Some(old) => r.ladd(&old, &term),
                    None => term,
                };
                if !r.lis_zero(&s) {
                    out.insert(key, s);
                }
            }
        }
        out
    }

    /// `𝔰(η_{t_λ}) = η_{t_{-λ}}`, extended left `Q`-linearly.
    pub fn antipode(&self, z: &TElem) -> TElem {
        let rs = self.fada.rs();
        TElem { terms: z.terms.iter().map(|(w, c)| (rs.translation(negate(&w.lam)), c.clone())).collect() }
    }

    /// `ε(Σ p_λ η_{t_λ}) = Σ p_λ`.
    pub fn counit(&self, z: &TElem) -> Loc {
        let r = self.fada.ring();
        z.terms.values().fold(r.loc_zero(), |acc, c| r.ladd(&acc, c))
    }

    /// `(ε ⊗ id)Δ = id`, `(id ⊗ ε)Δ = id` and `m(𝔰 ⊗ id)Δ = ε·1`.
    pub fn hopf_check(&self, z: &TElem) -> bool {
        let f = &self.fada;
        let rs = f.rs();
        let delta = self.coproduct(z);
        let mut left = f.zero();
        let mut right = f.zero();
        let mut anti = f.zero();
        for ((l, m), c) in &delta {
            left = f.add(&left, &f.scalar_eta(c.clone(), &rs.translation(*m)));
            right = f.add(&right, &f.scalar_eta(c.clone(), &rs.translation(*l)));
            let s = self.antipode(&f.eta(&rs.translation(*l)));
            anti = f.add(&anti, &f.lscale(c, &f.mul(&s, &f.eta(&rs.translation(*m)))));
        }
        let eps = f.scalar(self.counit(z));
        f.equal(&left, z) && f.equal(&right, z) && f.equal(&anti, &eps)
    }

    /// Pairing of a translation dual with a translation element.
    pub fn pair_translations(&self, g: &BTreeMap<Vector, Loc>, z: &TElem) -> Loc {
        let r = self.fada.ring();
        let zero = r.loc_zero();
        z.terms
            .iter()
            .fold(r.loc_zero(), |acc, (w, c)| r.ladd(&acc, &r.lmul(c, g.get(&w.lam).unwrap_or(&zero))))
    }

    pub fn expansion_to_json(&self, e: &PetersonExpansion) -> serde_json::Value {
        let f = &self.fada;
        let rs = f.rs();
        let mut keys: Vec<&AffElem> = e.coeffs.keys().collect();
        keys.sort_by_key(|w| (rs.length(w), f.word_of(w)));
        let coeffs: Vec<serde_json::Value> = keys
            .into_iter()
            .map(|w| serde_json::json!([f.word_of(w), f.ring().to_json(&e.coeffs[w])]))
            .collect();
        serde_json::json!({ "u": e.word, "coeffs": coeffs })
    }
}
