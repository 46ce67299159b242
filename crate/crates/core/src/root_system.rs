//! Finite root data from a Cartan matrix, the affine root system and the
//! affine Weyl group `W_a = W ⋉ Q^∨`.
//!
//! Roots are integer vectors in the basis of simple roots, coroots in the
//! basis of simple coroots. Letters of words are `0..=n`, where `0` is the
//! affine reflection.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{LAT, MAX_RANK};

pub type Vector = [i32; MAX_RANK];
/// A vector of the big-torus lattice: `n` root coordinates, then `δ` in slot `n`.
pub type LVec = [i32; LAT];

pub const ZERO_VEC: Vector = [0; MAX_RANK];

const MAX_WEYL: usize = 200_000;
const TABLE_LIMIT: usize = 2048;

/// An element `w·t_λ` of the affine Weyl group; `w` indexes the finite Weyl
/// group of the owning [`RootSystem`], `lam` is a coroot vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffElem {
    pub w: u32,
    pub lam: Vector,
}

/// `α + kδ` with `α` a finite root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineRoot {
    pub alpha: Vector,
    pub k: i32,
}

#[derive(Clone, Debug)]
struct WElem {
    root_mat: Vec<i32>,
    coroot_mat: Vec<i32>,
    length: u32,
    word: Vec<u8>,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    n: usize,
    cartan: Vec<Vec<i32>>,
    positive: Vec<Vector>,
    positive_coroots: Vec<Vector>,
    theta: Vector,
    theta_coroot: Vector,
    elems: Vec<WElem>,
    index: HashMap<Vec<i32>, u32>,
    inverse: Vec<u32>,
    lmul: Vec<Vec<u32>>,
    table: Option<Vec<u32>>,
    // neg[w][j]: w sends positive root j to a negative root
    neg: Vec<Vec<bool>>,
    w0: u32,
}

pub fn is_positive(v: &[i32]) -> bool {
    v.iter().all(|&x| x >= 0) && v.iter().any(|&x| x > 0)
}

impl RootSystem {
    pub fn new(cartan: Vec<Vec<i32>>) -> Result<Self> {
        let n = cartan.len();
        if n == 0 || n > MAX_RANK {
            return Err(Error::InvalidRootDatum(format!("rank must be between 1 and {MAX_RANK}, got {n}")));
        }
        for (i, row) in cartan.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidRootDatum("Cartan matrix is not square".into()));
            }
            for (j, &a) in row.iter().enumerate() {
                if i == j && a != 2 {
                    return Err(Error::InvalidRootDatum(format!("diagonal entry a_{i}{j} = {a}")));
                }
                if i != j && (a > 0 || (a == 0) != (cartan[j][i] == 0)) {
                    return Err(Error::InvalidRootDatum(format!("bad off-diagonal entry a_{i}{j} = {a}")));
                }
            }
        }
        // connected Dynkin diagram
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && cartan[i][j] != 0 {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidRootDatum("Cartan matrix is not irreducible".into()));
        }
        let mut rs = RootSystem {
            n,
            cartan,
            positive: Vec::new(),
            positive_coroots: Vec::new(),
            theta: ZERO_VEC,
            theta_coroot: ZERO_VEC,
            elems: Vec::new(),
            index: HashMap::new(),
            inverse: Vec::new(),
            lmul: Vec::new(),
            table: None,
            neg: Vec::new(),
            w0: 0,
        };
        rs.build_roots()?;
        rs.build_weyl()?;
        Ok(rs)
    }

    pub fn from_type(name: &str) -> Result<Self> {
        let cartan = match name {
            "A1" => vec![vec![2]],
            "A2" => vec![vec![2, -1], vec![-1, 2]],
            "B2" | "C2" => vec![vec![2, -2], vec![-1, 2]],
            "G2" => vec![vec![2, -1], vec![-3, 2]],
            "A3" => vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
            _ => return Err(Error::InvalidRootDatum(format!("unknown type {name}"))),
        };
        Self::new(cartan)
    }

    fn build_roots(&mut self) -> Result<()> {
        let n = self.n;
        let mut seen: HashMap<Vector, Vector> = HashMap::new();
        let mut queue = VecDeque::new();
        for i in 0..n {
            let mut a = ZERO_VEC;
            a[i] = 1;
            seen.insert(a, a);
            queue.push_back((a, a));
        }
        while let Some((r, c)) = queue.pop_front() {
            for i in 0..n {
                let (r2, c2) = (self.reflect_root(i, &r), self.reflect_coroot(i, &c));
                if !seen.contains_key(&r2) {
                    if seen.len() > 1000 {
                        return Err(Error::InvalidRootDatum("Cartan matrix is not of finite type".into()));
                    }
                    seen.insert(r2, c2);
                    queue.push_back((r2, c2));
                }
            }
        }
        let mut pos: Vec<(Vector, Vector)> = seen.into_iter().filter(|(r, _)| is_positive(r)).collect();
        pos.sort_by_key(|(r, _)| (r.iter().sum::<i32>(), std::cmp::Reverse(*r)));
        let (theta, theta_c) = *pos.last().unwrap();
        for (r, _) in &pos {
            let diff: Vec<i32> = (0..n).map(|i| theta[i] - r[i]).collect();
            if diff.iter().any(|&d| d < 0) {
                return Err(Error::InvalidRootDatum("no highest root".into()));
            }
        }
        self.theta = theta;
        self.theta_coroot = theta_c;
        self.positive = pos.iter().map(|p| p.0).collect();
        self.positive_coroots = pos.iter().map(|p| p.1).collect();
        Ok(())
    }

    fn build_weyl(&mut self) -> Result<()> {
        let n = self.n;
        let mut id = vec![0; n * n];
        for i in 0..n {
            id[i * n + i] = 1;
        }
        let mut elems = vec![WElem { root_mat: id.clone(), coroot_mat: id.clone(), length: 0, word: vec![] }];
        let mut index: HashMap<Vec<i32>, u32> = HashMap::new();
        index.insert(id, 0);
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &e in &frontier {
                for i in 0..n {
                    let rm = self.left_reflect_matrix(i, &elems[e].root_mat, false);
                    if index.contains_key(&rm) {
                        continue;
                    }
                    if elems.len() >= MAX_WEYL {
                        return Err(Error::InvalidRootDatum("finite Weyl group too large".into()));
                    }
                    let cm = self.left_reflect_matrix(i, &elems[e].coroot_mat, true);
                    let mut word = vec![i as u8 + 1];
                    word.extend_from_slice(&elems[e].word);
                    index.insert(rm.clone(), elems.len() as u32);
                    next.push(elems.len());
                    elems.push(WElem { root_mat: rm, coroot_mat: cm, length: elems[e].length + 1, word });
                }
            }
            frontier = next;
        }
        // canonical order: length, then lexicographically smallest word
        let mut tmp = RootSystem { elems, index, ..self.clone() };
        let mut order: Vec<usize> = (0..tmp.elems.len()).collect();
        let words: Vec<Vec<u8>> = (0..tmp.elems.len()).map(|e| tmp.finite_lex_word(e)).collect();
        order.sort_by(|&a, &b| (tmp.elems[a].length, &words[a]).cmp(&(tmp.elems[b].length, &words[b])));
        let mut elems: Vec<WElem> = order
            .iter()
            .map(|&e| {
                let mut el = tmp.elems[e].clone();
                el.word = words[e].clone();
                el
            })
            .collect();
        tmp.elems.clear();
        let index: HashMap<Vec<i32>, u32> =
            elems.iter().enumerate().map(|(k, e)| (e.root_mat.clone(), k as u32)).collect();
        self.index = index;
        let size = elems.len();
        self.elems = std::mem::take(&mut elems);
        self.lmul = (0..n)
            .map(|i| {
                (0..size)
                    .map(|e| self.index[&self.left_reflect_matrix(i, &self.elems[e].root_mat, false)])
                    .collect()
            })
            .collect();
        self.inverse = (0..size)
            .map(|e| {
                let mut acc = 0u32;
                for &l in &self.elems[e].word {
                    acc = self.lmul[l as usize - 1][acc as usize];
                }
                acc
            })
            .collect();
        if size <= TABLE_LIMIT {
            let mut table = vec![0u32; size * size];
            for a in 0..size {
                for b in 0..size {
                    table[a * size + b] = self.mul_slow(a as u32, b as u32);
                }
            }
            self.table = Some(table);
        }
        self.neg = (0..size)
            .map(|e| self.positive.iter().map(|r| !is_positive(&self.w_root(e as u32, r))).collect())
            .collect();
        self.w0 = (size - 1) as u32;
        if self.elems[size - 1].length as usize != self.positive.len() {
            return Err(Error::InvalidRootDatum("length of w0 differs from number of positive roots".into()));
        }
        Ok(())
    }

    fn finite_lex_word(&self, e: usize) -> Vec<u8> {
        // smallest left descent first
        let mut word = Vec::new();
        let mut cur = self.elems[e].root_mat.clone();
        let mut len = self.elems[e].length;
        while len > 0 {
            for i in 0..self.n {
                let m = self.left_reflect_matrix(i, &cur, false);
                let k = self.index[&m] as usize;
                if self.elems[k].length < len {
                    word.push(i as u8 + 1);
                    cur = m;
                    len -= 1;
                    break;
                }
            }
        }
        word
    }

    fn left_reflect_matrix(&self, i: usize, mat: &[i32], coroot: bool) -> Vec<i32> {
        let n = self.n;
        let mut out = mat.to_vec();
        for col in 0..n {
            let mut v = ZERO_VEC;
            for row in 0..n {
                v[row] = mat[row * n + col];
            }
            let r = if coroot { self.reflect_coroot(i, &v) } else { self.reflect_root(i, &v) };
            for row in 0..n {
                out[row * n + col] = r[row];
            }
        }
        out
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let mut acc = b;
        for &l in self.elems[a as usize].word.iter().rev() {
            acc = self.lmul[l as usize - 1][acc as usize];
        }
        acc
    }

    // ---- finite data ----

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Vector] {
        &self.positive
    }

    pub fn positive_coroots(&self) -> &[Vector] {
        &self.positive_coroots
    }

    pub fn theta(&self) -> Vector {
        self.theta
    }

    pub fn theta_coroot(&self) -> Vector {
        self.theta_coroot
    }

    pub fn simple_root(&self, i: usize) -> Vector {
        let mut v = ZERO_VEC;
        v[i - 1] = 1;
        v
    }

    /// `⟨λ, μ⟩` for a coroot vector `λ` and a root vector `μ`.
    pub fn pair(&self, lam: &Vector, mu: &Vector) -> i32 {
        let mut s = 0;
        for i in 0..self.n {
            if lam[i] == 0 {
                continue;
            }
            for j in 0..self.n {
                s += lam[i] * self.cartan[i][j] * mu[j];
            }
        }
        s
    }

    /// Simple reflection `s_{i+1}` (0-based `i`) on a root vector.
    pub fn reflect_root(&self, i: usize, mu: &Vector) -> Vector {
        let p: i32 = (0..self.n).map(|j| self.cartan[i][j] * mu[j]).sum();
        let mut out = *mu;
        out[i] -= p;
        out
    }

    pub fn reflect_coroot(&self, i: usize, lam: &Vector) -> Vector {
        let p: i32 = (0..self.n).map(|j| lam[j] * self.cartan[j][i]).sum();
        let mut out = *lam;
        out[i] -= p;
        out
    }

    /// Index of a positive root (or of `-α` for a negative root `α`) and
    /// whether it was negated.
    pub fn root_index(&self, alpha: &Vector) -> Option<(usize, bool)> {
        if let Some(k) = self.positive.iter().position(|r| r == alpha) {
            return Some((k, false));
        }
        let neg = negate(alpha);
        self.positive.iter().position(|r| *r == neg).map(|k| (k, true))
    }

    /// The coroot `α^∨` of a root `α`.
    pub fn coroot_of(&self, alpha: &Vector) -> Vector {
        let (k, negd) = self.root_index(alpha).expect("not a root");
        if negd {
            negate(&self.positive_coroots[k])
        } else {
            self.positive_coroots[k]
        }
    }

    pub fn is_root(&self, alpha: &Vector) -> bool {
        self.root_index(alpha).is_some()
    }

    // ---- finite Weyl group ----

    pub fn weyl_order(&self) -> usize {
        self.elems.len()
    }

    pub fn w0(&self) -> u32 {
        self.w0
    }

    pub fn w_len(&self, w: u32) -> u32 {
        self.elems[w as usize].length
    }

    /// Lexicographically smallest reduced word, letters in `1..=n`.
    pub fn w_word(&self, w: u32) -> &[u8] {
        &self.elems[w as usize].word
    }

    pub fn w_mul(&self, a: u32, b: u32) -> u32 {
        match &self.table {
            Some(t) => t[a as usize * self.elems.len() + b as usize],
            None => self.mul_slow(a, b),
        }
    }

    pub fn w_inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    /// Simple reflection `s_i`, `i` in `1..=n`.
    pub fn w_simple(&self, i: usize) -> u32 {
        self.lmul[i - 1][0]
    }

    pub fn w_from_word(&self, word: &[u8]) -> u32 {
        let mut acc = 0;
        for &l in word.iter().rev() {
            acc = self.lmul[l as usize - 1][acc as usize];
        }
        acc
    }

    /// `w(μ)` for a root vector.
    pub fn w_root(&self, w: u32, mu: &Vector) -> Vector {
        apply(&self.elems[w as usize].root_mat, self.n, mu)
    }

    /// `w(λ)` for a coroot vector.
    pub fn w_coroot(&self, w: u32, lam: &Vector) -> Vector {
        apply(&self.elems[w as usize].coroot_mat, self.n, lam)
    }

    /// The reflection `s_α` for a root `α`.
    pub fn w_reflection(&self, alpha: &Vector) -> u32 {
        let n = self.n;
        let c = self.coroot_of(alpha);
        let mut mat = vec![0; n * n];
        for col in 0..n {
            let mut e = ZERO_VEC;
            e[col] = 1;
            let p = self.pair(&c, &e);
            for row in 0..n {
                mat[row * n + col] = e[row] - p * alpha[row];
            }
        }
        self.index[&mat]
    }

    /// Does `w` send the `j`-th positive root to a negative root?
    pub fn w_sends_negative(&self, w: u32, j: usize) -> bool {
        self.neg[w as usize][j]
    }

    // ---- affine Weyl group ----

    pub fn identity(&self) -> AffElem {
        AffElem { w: 0, lam: ZERO_VEC }
    }

    pub fn translation(&self, lam: Vector) -> AffElem {
        AffElem { w: 0, lam }
    }

    pub fn finite(&self, w: u32) -> AffElem {
        AffElem { w, lam: ZERO_VEC }
    }

    /// `s_0 = s_θ t_{-θ^∨}`, `s_i` for `i ≥ 1`.
    pub fn simple(&self, i: usize) -> AffElem {
        if i == 0 {
            AffElem { w: self.w_reflection(&self.theta), lam: negate(&self.theta_coroot) }
        } else {
            self.finite(self.w_simple(i))
        }
    }

    /// `(w1 t_λ1)(w2 t_λ2) = w1 w2 t_{w2^{-1}(λ1) + λ2}`.
    pub fn mul(&self, a: &AffElem, b: &AffElem) -> AffElem {
        let moved = self.w_coroot(self.w_inv(b.w), &a.lam);
        AffElem { w: self.w_mul(a.w, b.w), lam: add(&moved, &b.lam) }
    }

    pub fn inv(&self, a: &AffElem) -> AffElem {
        AffElem { w: self.w_inv(a.w), lam: negate(&self.w_coroot(a.w, &a.lam)) }
    }

    pub fn from_word(&self, word: &[u8]) -> AffElem {
        let mut acc = self.identity();
        for &l in word {
            acc = self.mul(&acc, &self.simple(l as usize));
        }
        acc
    }

    /// `ℓ(w t_λ) = Σ_{α>0} |⟨λ, α⟩ + χ(w(α) < 0)|`.
    pub fn length(&self, x: &AffElem) -> u32 {
        let mut total = 0i32;
        for (j, a) in self.positive.iter().enumerate() {
            let p = self.pair(&x.lam, a) + self.neg[x.w as usize][j] as i32;
            total += p.abs();
        }
        total as u32
    }

    /// Action on the big-torus lattice: `w t_λ (μ + mδ) = w(μ) + (m - ⟨λ, μ⟩)δ`.
    pub fn act(&self, x: &AffElem, v: &LVec) -> LVec {
        let n = self.n;
        let mut mu = ZERO_VEC;
        mu[..n].copy_from_slice(&v[..n]);
        let m = v[n] - self.pair(&x.lam, &mu);
        let img = self.w_root(x.w, &mu);
        let mut out = [0; LAT];
        out[..n].copy_from_slice(&img[..n]);
        out[n] = m;
        out
    }

    /// Level-zero action: only the finite part acts.
    pub fn act_small(&self, x: &AffElem, v: &LVec) -> LVec {
        let n = self.n;
        let mut mu = ZERO_VEC;
        mu[..n].copy_from_slice(&v[..n]);
        let img = self.w_root(x.w, &mu);
        let mut out = [0; LAT];
        out[..n].copy_from_slice(&img[..n]);
        out
    }

    /// `s_{α+kδ} = s_α t_{kα^∨}`.
    pub fn affine_reflection(&self, root: &AffineRoot) -> AffElem {
        let c = self.coroot_of(&root.alpha);
        AffElem { w: self.w_reflection(&root.alpha), lam: scale(&c, root.k) }
    }

    /// The simple affine root `α_i` (with `α_0 = -θ + δ`).
    pub fn simple_affine_root(&self, i: usize) -> AffineRoot {
        if i == 0 {
            AffineRoot { alpha: negate(&self.theta), k: 1 }
        } else {
            AffineRoot { alpha: self.simple_root(i), k: 0 }
        }
    }

    pub fn affine_root_vec(&self, r: &AffineRoot) -> LVec {
        let mut out = [0; LAT];
        out[..self.n].copy_from_slice(&r.alpha[..self.n]);
        out[self.n] = r.k;
        out
    }

    pub fn is_positive_affine(&self, r: &AffineRoot) -> bool {
        r.k > 0 || (r.k == 0 && is_positive(&r.alpha))
    }

    /// `inv(x) = x^{-1} Φ_a^+ ∩ Φ_a^-`.
    pub fn inversions(&self, x: &AffElem) -> Vec<AffineRoot> {
        let mut out = Vec::new();
        for pos in &self.positive {
            for alpha in [*pos, negate(pos)] {
                let p = self.pair(&x.lam, &alpha);
                // x(α + kδ) = w(α) + (k - p)δ; negative needs k ≤ 0
                for k in p.min(0)..=0 {
                    let r = AffineRoot { alpha, k };
                    if self.is_positive_affine(&r) {
                        continue;
                    }
                    let img = AffineRoot { alpha: self.w_root(x.w, &alpha), k: k - p };
                    if self.is_positive_affine(&img) {
                        out.push(r);
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Left descent test `ℓ(s_i x) < ℓ(x)`.
    pub fn is_left_descent(&self, i: usize, x: &AffElem) -> bool {
        self.length(&self.mul(&self.simple(i), x)) < self.length(x)
    }

    pub fn is_right_descent(&self, x: &AffElem, i: usize) -> bool {
        self.length(&self.mul(x, &self.simple(i))) < self.length(x)
    }

    /// Lexicographically smallest reduced word.
    pub fn reduced_word(&self, x: &AffElem) -> Vec<u8> {
        let mut word = Vec::new();
        let mut cur = *x;
        let mut len = self.length(&cur);
        while len > 0 {
            for i in 0..=self.n {
                let y = self.mul(&self.simple(i), &cur);
                let l = self.length(&y);
                if l < len {
                    word.push(i as u8);
                    cur = y;
                    len = l;
                    break;
                }
            }
        }
        word
    }

    /// Every reduced word of `x`, in lexicographic order.
    pub fn all_reduced_words(&self, x: &AffElem) -> Vec<Vec<u8>> {
        let len = self.length(x);
        if len == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for i in 0..=self.n {
            let y = self.mul(&self.simple(i), x);
            if self.length(&y) < len {
                for mut w in self.all_reduced_words(&y) {
                    w.insert(0, i as u8);
                    out.push(w);
                }
            }
        }
        out
    }

    pub fn is_reduced(&self, word: &[u8]) -> bool {
        self.length(&self.from_word(word)) as usize == word.len()
    }

    /// All elements of length at most `max_len`, sorted by length and then
    /// by their lexicographically smallest reduced word.
    pub fn elements_up_to(&self, max_len: u32) -> Vec<AffElem> {
        let mut out = vec![self.identity()];
        let mut level = vec![self.identity()];
        for len in 1..=max_len {
            let mut next: HashSet<AffElem> = HashSet::new();
            for x in &level {
                for i in 0..=self.n {
                    let y = self.mul(&self.simple(i), x);
                    if self.length(&y) == len {
                        next.insert(y);
                    }
                }
            }
            let mut next: Vec<(Vec<u8>, AffElem)> = next.into_iter().map(|y| (self.reduced_word(&y), y)).collect();
            next.sort();
            level = next.into_iter().map(|(_, y)| y).collect();
            out.extend_from_slice(&level);
        }
        out
    }

    /// Lengths found by breadth-first search in the Cayley graph, independent
    /// of the closed formula.
    pub fn lengths_by_bfs(&self, max_len: u32) -> HashMap<AffElem, u32> {
        let mut dist = HashMap::new();
        dist.insert(self.identity(), 0);
        let mut level = vec![self.identity()];
        for len in 1..=max_len {
            let mut next = Vec::new();
            for x in &level {
                for i in 0..=self.n {
                    let y = self.mul(&self.simple(i), x);
                    if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(y) {
                        e.insert(len);
                        next.push(y);
                    }
                }
            }
            level = next;
        }
        dist
    }

    /// `x = u·v` with `u` minimal in `xW` and `v ∈ W`.
    pub fn coset_decompose(&self, x: &AffElem) -> (AffElem, u32) {
        let mut u = *x;
        let mut v = 0u32;
        'outer: loop {
            for i in 1..=self.n {
                if self.is_right_descent(&u, i) {
                    u = self.mul(&u, &self.simple(i));
                    v = self.w_mul(self.w_simple(i), v);
                    continue 'outer;
                }
            }
            return (u, v);
        }
    }

    pub fn is_minimal(&self, x: &AffElem) -> bool {
        (1..=self.n).all(|i| !self.is_right_descent(x, i))
    }

    /// Reduced word `I_u ∪ I_v` for `x = uv`.
    pub fn compatible_word(&self, x: &AffElem) -> Vec<u8> {
        let (u, v) = self.coset_decompose(x);
        let mut word = self.reduced_word(&u);
        word.extend_from_slice(self.w_word(v));
        word
    }

    pub fn w_compatible_words(&self, max_len: u32) -> Vec<(AffElem, Vec<u8>)> {
        self.elements_up_to(max_len).into_iter().map(|x| (x, self.compatible_word(&x))).collect()
    }

    /// `u ↦ λ` with `uW = t_λ W`.
    pub fn translation_of(&self, u: &AffElem) -> Result<Vector> {
        if !self.is_minimal(u) {
            return Err(Error::NotMinimal);
        }
        Ok(self.w_coroot(u.w, &u.lam))
    }

    /// The minimal representative of `t_λ W`.
    pub fn minimal_of_translation(&self, lam: &Vector) -> AffElem {
        self.coset_decompose(&self.translation(*lam)).0
    }

    /// Bruhat order, via the lifting property.
    pub fn bruhat_le(&self, x: &AffElem, y: &AffElem) -> bool {
        let ly = self.length(y);
        let lx = self.length(x);
        if lx > ly {
            return false;
        }
        if ly == 0 {
            return lx == 0;
        }
        for i in 0..=self.n {
            let sy = self.mul(&self.simple(i), y);
            if self.length(&sy) < ly {
                let sx = self.mul(&self.simple(i), x);
                return if self.length(&sx) < lx { self.bruhat_le(&sx, &sy) } else { self.bruhat_le(x, &sy) };
            }
        }
        unreachable!()
    }

    /// Entry `a_ij` of the affine Cartan matrix, indices in `0..=n`.
    pub fn affine_cartan(&self, i: usize, j: usize) -> i32 {
        let coroot = |k: usize| if k == 0 { negate(&self.theta_coroot) } else { self.simple_root_coroot(k) };
        let root = |k: usize| if k == 0 { negate(&self.theta) } else { self.simple_root(k) };
        self.pair(&coroot(i), &root(j))
    }

    fn simple_root_coroot(&self, i: usize) -> Vector {
        let mut v = ZERO_VEC;
        v[i - 1] = 1;
        v
    }

    /// Coxeter exponent `m_ij` of the affine Weyl group (`None` for ∞).
    pub fn coxeter_m(&self, i: usize, j: usize) -> Option<u32> {
        if i == j {
            return Some(1);
        }
        match self.affine_cartan(i, j) * self.affine_cartan(j, i) {
            0 => Some(2),
            1 => Some(3),
            2 => Some(4),
            3 => Some(6),
            _ => None,
        }
    }

    /// Elements of the finite Weyl group in canonical order.
    pub fn finite_elements(&self) -> impl Iterator<Item = u32> {
        0..self.elems.len() as u32
    }

    pub fn lvec_of_root(&self, alpha: &Vector, k: i32) -> LVec {
        self.affine_root_vec(&AffineRoot { alpha: *alpha, k })
    }
}

fn apply(mat: &[i32], n: usize, v: &Vector) -> Vector {
    let mut out = ZERO_VEC;
    for row in 0..n {
        let mut s = 0;
        for col in 0..n {
            s += mat[row * n + col] * v[col];
        }
        out[row] = s;
    }
    out
}

pub fn negate(v: &Vector) -> Vector {
    let mut out = *v;
    for x in out.iter_mut() {
        *x = -*x;
    }
    out
}

pub fn add(a: &Vector, b: &Vector) -> Vector {
    let mut out = *a;
    for i in 0..MAX_RANK {
        out[i] += b[i];
    }
    out
}

pub fn scale(a: &Vector, k: i32) -> Vector {
    let mut out = *a;
    for x in out.iter_mut() {
        *x *= k;
    }
    out
}

pub fn vector(v: &[i32]) -> Vector {
    let mut out = ZERO_VEC;
    out[..v.len()].copy_from_slice(v);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1() -> RootSystem {
        RootSystem::from_type("A1").unwrap()
    }

    #[test]
    fn finite_data() {
        for (t, np, w) in [("A1", 1, 2), ("A2", 3, 6), ("B2", 4, 8), ("G2", 6, 12), ("A3", 6, 24)] {
            let rs = RootSystem::from_type(t).unwrap();
            assert_eq!(rs.positive_roots().len(), np, "{t}");
            assert_eq!(rs.weyl_order(), w, "{t}");
            assert_eq!(rs.w_len(rs.w0()) as usize, np);
        }
        let a2 = RootSystem::from_type("A2").unwrap();
        assert_eq!(a2.theta(), vector(&[1, 1]));
    }

    #[test]
    fn rejects_bad_cartan() {
        assert!(RootSystem::new(vec![vec![2, -2], vec![-2, 2]]).is_err());
        assert!(RootSystem::new(vec![vec![2, 0], vec![0, 2]]).is_err());
        assert!(RootSystem::new(vec![vec![2, -1], vec![0, 2]]).is_err());
    }

    #[test]
    fn affine_action_a1() {
        let rs = a1();
        let alpha = rs.lvec_of_root(&vector(&[1]), 0);
        assert_eq!(rs.act(&rs.simple(1), &alpha), rs.lvec_of_root(&vector(&[-1]), 0));
        assert_eq!(rs.act(&rs.simple(0), &alpha), rs.lvec_of_root(&vector(&[-1]), 2));
        assert_eq!(rs.act_small(&rs.simple(0), &alpha), rs.lvec_of_root(&vector(&[-1]), 0));
    }

    #[test]
    fn translations_in_a1() {
        let rs = a1();
        let t = rs.from_word(&[0, 1]);
        assert_eq!(t, rs.translation(vector(&[1])));
        assert_eq!(rs.length(&t), 2);
        assert_eq!(rs.from_word(&[1, 0]), rs.translation(vector(&[-1])));
        assert_eq!(rs.length(&rs.from_word(&[0, 1, 0, 1, 0])), 5);
    }

    #[test]
    fn enumeration_small_cases() {
        let rs = a1();
        let els = rs.elements_up_to(2);
        let words: Vec<Vec<u8>> = els.iter().map(|x| rs.reduced_word(x)).collect();
        assert_eq!(words, vec![vec![], vec![0], vec![1], vec![0, 1], vec![1, 0]]);
        assert_eq!(rs.elements_up_to(0).len(), 1);
        let a2 = RootSystem::from_type("A2").unwrap();
        // Poincaré series (1 + q + q^2)/(1 - q)^2 gives 1, 3, 6, 9
        let counts: Vec<usize> = (0..=3).map(|l| a2.elements_up_to(l).len()).collect();
        assert_eq!(counts, vec![1, 4, 10, 19]);
    }

    #[test]
    fn coset_examples() {
        let rs = a1();
        assert_eq!(rs.coset_decompose(&rs.simple(1)), (rs.identity(), rs.w_simple(1)));
        assert_eq!(rs.coset_decompose(&rs.simple(0)), (rs.simple(0), 0));
        let t = rs.from_word(&[0, 1]);
        assert_eq!(rs.coset_decompose(&t), (rs.simple(0), rs.w_simple(1)));
        assert_eq!(rs.compatible_word(&t), vec![0, 1]);
        assert_eq!(rs.compatible_word(&rs.from_word(&[0, 1, 0])), vec![0, 1, 0]);
        assert_eq!(rs.translation_of(&rs.simple(0)).unwrap(), vector(&[1]));
        assert_eq!(rs.translation_of(&rs.from_word(&[1, 0])).unwrap(), vector(&[-1]));
        assert!(rs.translation_of(&rs.simple(1)).is_err());
    }

    #[test]
    fn inversions_examples() {
        let rs = a1();
        assert!(rs.inversions(&rs.identity()).is_empty());
        assert_eq!(rs.inversions(&rs.simple(1)), vec![AffineRoot { alpha: vector(&[-1]), k: 0 }]);
        let inv = rs.inversions(&rs.from_word(&[0, 1]));
        assert_eq!(inv.len(), 2);
        assert!(inv.iter().all(|r| r.alpha == vector(&[-1])));
    }

    #[test]
    fn coxeter_exponents() {
        let rs = a1();
        assert_eq!(rs.coxeter_m(0, 1), None);
        let a2 = RootSystem::from_type("A2").unwrap();
        assert_eq!(a2.coxeter_m(0, 1), Some(3));
        let b2 = RootSystem::from_type("B2").unwrap();
        assert_eq!(b2.coxeter_m(1, 2), Some(4));
    }
}
