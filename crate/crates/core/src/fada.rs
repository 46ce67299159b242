//! Twisted group algebras `Q_{W_a}` (small torus) and `Q̂_{W_a}` (big torus),
//! Demazure elements and the η ↔ X basis change.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fga::{Ring, Torus};
use crate::formal_group::Series;
use crate::loc::Loc;
use crate::root_system::{AffElem, LVec, RootSystem};

/// A finite combination `Σ c_w η_w`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TElem {
    pub terms: BTreeMap<AffElem, Loc>,
}

impl TElem {
    pub fn coeff(&self, w: &AffElem) -> Option<&Loc> {
        self.terms.get(w)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &AffElem> {
        self.terms.keys()
    }
}

/// Which Demazure-type family a word is expanded in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `X_i = (1/x_{γ_i})(1 - η_{s_i})`.
    X,
    /// `Y_i = 𝔠 - X_i`.
    Y,
}

/// `b_{w,I_v}`: rows indexed by `w`, entries by `v`.
#[derive(Clone, Debug, Default)]
pub struct Expansion {
    pub window: u32,
    pub rows: BTreeMap<AffElem, BTreeMap<AffElem, Series>>,
}

#[derive(Clone, Debug)]
pub struct BraidReport {
    pub agree: bool,
    pub order: u32,
    pub first_difference: Option<(AffElem, Loc)>,
}

pub struct Fada {
    ring: Arc<Ring>,
    rs: Arc<RootSystem>,
    gammas: Vec<LVec>,
    simples: Vec<AffElem>,
    words: Mutex<HashMap<AffElem, Vec<u8>>>,
    cache: Mutex<HashMap<(Family, Vec<u8>), Arc<TElem>>>,
}

impl Fada {
    pub fn new(ring: Arc<Ring>) -> Self {
        let rs = ring.root_system_arc();
        let n = rs.rank();
        let gammas = (0..=n)
            .map(|i| {
                let mut v = [0; crate::poly::LAT];
                if i == 0 {
                    let th = rs.theta();
                    for j in 0..n {
                        v[j] = -th[j];
                    }
                    if ring.torus() == Torus::Big {
                        v[n] = 1;
                    }
                } else {
                    v[i - 1] = 1;
                }
                v
            })
            .collect();
        let simples = (0..=n).map(|i| rs.simple(i)).collect();
        Fada {
            ring,
            rs,
            gammas,
            simples,
            words: Mutex::new(HashMap::new()),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn ring_arc(&self) -> Arc<Ring> {
        self.ring.clone()
    }

    pub fn rs(&self) -> &RootSystem {
        &self.rs
    }

    /// The root `γ_i` with `X_i = (1/x_{γ_i})(1 - η_{s_i})`: `α_i` for
    /// `i ≥ 1`; `-θ + δ` (big torus) or `-θ` (small torus) for `i = 0`.
    pub fn gamma(&self, i: usize) -> LVec {
        self.gammas[i]
    }

    pub fn zero(&self) -> TElem {
        TElem::default()
    }

    pub fn eta(&self, w: &AffElem) -> TElem {
        self.scalar_eta(self.ring.loc_one(), w)
    }

    pub fn one(&self) -> TElem {
        self.eta(&self.rs.identity())
    }

    pub fn scalar_eta(&self, c: Loc, w: &AffElem) -> TElem {
        let mut t = TElem::default();
        if !self.ring.lis_zero(&c) {
            t.terms.insert(*w, c);
        }
        t
    }

    /// `c·η_e`.
    pub fn scalar(&self, c: Loc) -> TElem {
        self.scalar_eta(c, &self.rs.identity())
    }

    fn add_term(&self, t: &mut TElem, w: AffElem, c: Loc) {
        if self.ring.lis_zero(&c) {
            return;
        }
        let r = &self.ring;
        match t.terms.remove(&w) {
            Some(old) => {
                let s = r.ladd(&old, &c);
                if !r.lis_zero(&s) {
                    t.terms.insert(w, s);
                }
            }
            None => {
                t.terms.insert(w, c);
            }
        }
    }

    pub fn add(&self, a: &TElem, b: &TElem) -> TElem {
        let mut out = a.clone();
        for (w, c) in &b.terms {
            self.add_term(&mut out, *w, c.clone());
        }
        out
    }

    pub fn neg(&self, a: &TElem) -> TElem {
        TElem { terms: a.terms.iter().map(|(w, c)| (*w, self.ring.lneg(c))).collect() }
    }

    pub fn sub(&self, a: &TElem, b: &TElem) -> TElem {
        self.add(a, &self.neg(b))
    }

    /// `c·z` (left multiplication by an element of `Q`).
    pub fn lscale(&self, c: &Loc, z: &TElem) -> TElem {
        let mut out = TElem::default();
        for (w, d) in &z.terms {
            self.add_term(&mut out, *w, self.ring.lmul(c, d));
        }
        out
    }

    /// `cη_w · c'η_v = c·w(c')η_{wv}`.
    pub fn mul(&self, a: &TElem, b: &TElem) -> TElem {
        let r = &self.ring;
        let mut out = TElem::default();
        for (w, c) in &a.terms {
            for (v, d) in &b.terms {
                let coeff = r.lmul(c, &r.lact(w, d));
                self.add_term(&mut out, self.rs.mul(w, v), coeff);
            }
        }
        out
    }

    /// `z·X_i = Σ c_w w(1/x_{γ_i})(η_w - η_{ws_i})`.
    pub fn mul_x(&self, z: &TElem, i: usize) -> TElem {
        let r = &self.ring;
        let mut out = TElem::default();
        for (w, c) in &z.terms {
            let inv = r.inv_x(&r.act_vec(w, &self.gammas[i]));
            let t = r.lmul(c, &inv);
            self.add_term(&mut out, self.rs.mul(w, &self.simples[i]), r.lneg(&t));
            self.add_term(&mut out, *w, t);
        }
        out
    }

    /// `z·Y_i = 𝔠z - z·X_i`.
    pub fn mul_y(&self, z: &TElem, i: usize) -> TElem {
        let c = self.ring.loc(self.ring.c_param());
        self.sub(&self.lscale(&c, z), &self.mul_x(z, i))
    }

    pub fn demazure(&self, i: usize) -> TElem {
        self.mul_x(&self.one(), i)
    }

    pub fn y_elem(&self, i: usize) -> TElem {
        self.mul_y(&self.one(), i)
    }

    fn product_unchecked(&self, family: Family, word: &[u8]) -> Arc<TElem> {
        let key = (family, word.to_vec());
        if let Some(t) = self.cache.lock().unwrap().get(&key) {
            return t.clone();
        }
        let out = match word.split_last() {
            None => self.one(),
            Some((&last, prefix)) => {
                let p = self.product_unchecked(family, prefix);
                match family {
                    Family::X => self.mul_x(&p, last as usize),
                    Family::Y => self.mul_y(&p, last as usize),
                }
            }
        };
        let out = Arc::new(out);
        self.cache.lock().unwrap().insert(key, out.clone());
        out
    }

    /// `X_{i_1}···X_{i_k}` (or the `Y` product) for any word.
    pub fn product(&self, family: Family, word: &[u8]) -> Result<Arc<TElem>> {
        if let Some(&bad) = word.iter().find(|&&l| l as usize > self.rs.rank()) {
            return Err(Error::Config(format!("letter {bad} is not a simple index")));
        }
        Ok(self.product_unchecked(family, word))
    }

    /// `X_I` for a reduced word.
    pub fn x_word(&self, word: &[u8]) -> Result<Arc<TElem>> {
        self.family_word(Family::X, word)
    }

    pub fn family_word(&self, family: Family, word: &[u8]) -> Result<Arc<TElem>> {
        if !self.rs.is_reduced(word) {
            return Err(Error::NotReduced(word.to_vec()));
        }
        self.product(family, word)
    }

    /// The W-compatible reduced word `I_u ∪ I_v` for `w = uv`.
    pub fn word_of(&self, w: &AffElem) -> Vec<u8> {
        if let Some(word) = self.words.lock().unwrap().get(w) {
            return word.clone();
        }
        let word = self.rs.compatible_word(w);
        self.words.lock().unwrap().insert(*w, word.clone());
        word
    }

    /// `X_{I_w}` (or `Y_{I_w}`) for the W-compatible word of `w`.
    pub fn basis(&self, family: Family, w: &AffElem) -> Arc<TElem> {
        self.product_unchecked(family, &self.word_of(w))
    }

    /// Inverse of the coefficient of `η_w` in the basis element of `w`:
    /// `±x_{γ_1}·s_{i_1}(x_{γ_2})·s_{i_1}s_{i_2}(x_{γ_3})···`.
    pub fn leading_inverse(&self, family: Family, w: &AffElem) -> Series {
        let r = &self.ring;
        let word = self.word_of(w);
        let mut acc = r.one();
        let mut prefix = self.rs.identity();
        for &l in &word {
            acc = r.mul(&acc, &r.x(&r.act_vec(&prefix, &self.gammas[l as usize])));
            prefix = self.rs.mul(&prefix, &self.simples[l as usize]);
        }
        if family == Family::X && word.len() % 2 == 1 {
            acc = r.neg(&acc);
        }
        acc
    }

    fn check_window(&self, z: &TElem, window: u32) -> Result<()> {
        for w in z.terms.keys() {
            let l = self.rs.length(w);
            if l > window {
                return Err(Error::WindowExceeded { needed: l, window });
            }
        }
        Ok(())
    }

    /// Coordinates of `z` in the basis `{X_{I_u}}` (or `{Y_{I_u}}`) by
    /// peeling off the longest support element.
    pub fn coordinates(&self, family: Family, z: &TElem, window: u32) -> Result<BTreeMap<AffElem, Loc>> {
        self.check_window(z, window)?;
        let r = &self.ring;
        let mut rest = z.clone();
        let mut out = BTreeMap::new();
        while let Some(u) = rest
            .terms
            .keys()
            .max_by_key(|w| (self.rs.length(w), std::cmp::Reverse(**w)))
            .copied()
        {
            let b = r.lscale(&self.leading_inverse(family, &u), &rest.terms[&u]);
            let basis = self.basis(family, &u);
            rest = self.sub(&rest, &self.lscale(&b, &basis));
            if let Some(c) = rest.terms.get(&u) {
                if !r.lis_zero(c) {
                    // the series backend loses the top coefficient to precision
                    if r.is_exact() {
                        return Err(Error::ShapeViolation(format!("peeling failed at {u:?}")));
                    }
                    rest.terms.remove(&u);
                }
            }
            out.insert(u, b);
        }
        Ok(out)
    }

    /// Coordinates of `z` if they all lie in `S`.
    pub fn in_demazure_span(&self, z: &TElem, window: u32) -> Result<Option<BTreeMap<AffElem, Series>>> {
        let coords = self.coordinates(Family::X, z, window)?;
        let mut out = BTreeMap::new();
        for (u, c) in coords {
            match self.ring.in_s(&c) {
                Some(s) => {
                    out.insert(u, s);
                }
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    /// `b_{w,I_v}` for all `ℓ(w) ≤ window`.
    pub fn eta_in_basis(&self, family: Family, window: u32) -> Result<Expansion> {
        let elems = self.rs.elements_up_to(window);
        let rows: Vec<Result<(AffElem, BTreeMap<AffElem, Series>)>> = elems
            .par_iter()
            .map(|w| {
                let coords = self.coordinates(family, &self.eta(w), window)?;
                let mut row = BTreeMap::new();
                for (v, c) in coords {
                    let s = self.ring.in_s(&c).ok_or_else(|| Error::DenominatorRemains {
                        what: format!("b_{{{:?},{:?}}}", self.word_of(w), self.word_of(&v)),
                        detail: format!("{:?}", c.den.keys().collect::<Vec<_>>()),
                    })?;
                    row.insert(v, s);
                }
                Ok((*w, row))
            })
            .collect();
        let mut out = Expansion { window, rows: BTreeMap::new() };
        for r in rows {
            let (w, row) = r?;
            out.rows.insert(w, row);
        }
        Ok(out)
    }

    pub fn eta_in_x_basis(&self, window: u32) -> Result<Expansion> {
        self.eta_in_basis(Family::X, window)
    }

    /// `Z_α = (1/x_{-α})(1 - η_{t_{α^∨}})` on the small torus.
    pub fn z_element(&self, alpha: &crate::root_system::Vector) -> Result<TElem> {
        if self.ring.torus() != Torus::Small {
            return Err(Error::NotApplicable("Z_α lives in the small-torus algebra".into()));
        }
        if !self.rs.is_root(alpha) {
            return Err(Error::Config(format!("{alpha:?} is not a root")));
        }
        let r = &self.ring;
        let n = self.rs.rank();
        let mut neg = [0; crate::poly::LAT];
        for j in 0..n {
            neg[j] = -alpha[j];
        }
        let inv = r.inv_x(&neg);
        let t = self.rs.translation(self.rs.coroot_of(alpha));
        let diff = self.sub(&self.one(), &self.eta(&t));
        Ok(self.lscale(&inv, &diff))
    }

    /// `k`-th power `Z_α^k`.
    pub fn z_power(&self, alpha: &crate::root_system::Vector, k: u32) -> Result<TElem> {
        let z = self.z_element(alpha)?;
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, &z);
        }
        Ok(acc)
    }

    /// Compares `X_iX_jX_i···` with `X_jX_iX_j···` (`m_ij` factors each).
    pub fn braid_check(&self, i: usize, j: usize) -> Result<BraidReport> {
        if i == j || i > self.rs.rank() || j > self.rs.rank() {
            return Err(Error::Config(format!("({i}, {j}) is not a pair of distinct simple indices")));
        }
        let m = self
            .rs
            .coxeter_m(i, j)
            .ok_or_else(|| Error::NotApplicable(format!("s_{i} s_{j} has infinite order")))?;
        let w1: Vec<u8> = (0..m).map(|k| if k % 2 == 0 { i as u8 } else { j as u8 }).collect();
        let w2: Vec<u8> = (0..m).map(|k| if k % 2 == 0 { j as u8 } else { i as u8 }).collect();
        let a = self.product(Family::X, &w1)?;
        let b = self.product(Family::X, &w2)?;
        let r = &self.ring;
        let mut keys: Vec<AffElem> = a.terms.keys().chain(b.terms.keys()).copied().collect();
        keys.sort_by_key(|w| (self.rs.length(w), self.rs.reduced_word(w)));
        keys.dedup();
        let zero = r.loc_zero();
        for w in keys {
            let ca = a.terms.get(&w).unwrap_or(&zero);
            let cb = b.terms.get(&w).unwrap_or(&zero);
            if !r.leq(ca, cb) {
                return Ok(BraidReport { agree: false, order: m, first_difference: Some((w, r.lsub(ca, cb))) });
            }
        }
        Ok(BraidReport { agree: true, order: m, first_difference: None })
    }

    /// Applies `𝔭` coefficientwise; `self` is the big-torus algebra.
    pub fn project_to(&self, small: &Fada, z: &TElem) -> TElem {
        let mut out = TElem::default();
        for (w, c) in &z.terms {
            small.add_term(&mut out, *w, self.ring.project_loc(small.ring(), c));
        }
        out
    }

    pub fn equal(&self, a: &TElem, b: &TElem) -> bool {
        if self.ring.is_exact() {
            return a == b;
        }
        self.sub(a, b).terms.values().all(|c| self.ring.lis_zero(c))
    }

    /// Applies `z` to an element of `S` via `η_w ↦ w(·)`.
    pub fn apply(&self, z: &TElem, f: &Loc) -> Loc {
        let r = &self.ring;
        let mut acc = r.loc_zero();
        for (w, c) in &z.terms {
            acc = r.ladd(&acc, &r.lmul(c, &r.lact(w, f)));
        }
        acc
    }

    /// The word-indexed JSON form `{"word": [...], "coefficient": ...}`.
    pub fn to_json(&self, z: &TElem) -> serde_json::Value {
        let mut keys: Vec<&AffElem> = z.terms.keys().collect();
        keys.sort_by_key(|w| (self.rs.length(w), self.rs.reduced_word(w)));
        let terms: Vec<serde_json::Value> = keys
            .into_iter()
            .map(|w| {
                serde_json::json!({
                    "eta": self.rs.reduced_word(w),
                    "coefficient": self.ring.loc_to_json(&z.terms[w]),
                })
            })
            .collect();
        serde_json::json!({ "terms": terms })
    }
}
