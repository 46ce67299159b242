//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fada_core::a1hat::{s_leq, A1Hat};
use fada_core::certify::{to_additive, Backends};
use fada_core::connective::Connective;
use fada_core::dual::Dual;
use fada_core::fada::{Fada, Family, TElem};
use fada_core::fga::{lvec, Ring, Torus};
use fada_core::formal_group::{FormalGroupLaw, Series};
use fada_core::loc::Loc;
use fada_core::peterson::Peterson;
use fada_core::poly::{Poly, ZERO_EXP};
use fada_core::root_system::{vector, AffElem, LVec, RootSystem};

type Outcome = Result<String, String>;

fn rs(ty: &str) -> Arc<RootSystem> {
    Arc::new(RootSystem::from_type(ty).unwrap())
}

fn fada(ring: Ring) -> Arc<Fada> {
    Arc::new(Fada::new(Arc::new(ring)))
}

fn exact_rings(rs: &Arc<RootSystem>) -> Vec<(&'static str, Ring)> {
    vec![
        ("c=0", Ring::additive(rs.clone(), Torus::Small)),
        ("c=1", Ring::multiplicative(rs.clone(), Torus::Small)),
        ("generic c", Ring::connective(rs.clone(), Torus::Small)),
    ]
}

fn words(f: &Fada, m: &BTreeMap<AffElem, Series>) -> String {
    let parts: Vec<String> = m.iter().map(|(v, c)| format!("{:?}: {}", f.word_of(v), f.ring().to_json(c))).collect();
    parts.join(", ")
}

fn same_map(f: &Fada, a: &BTreeMap<AffElem, Series>, b: &BTreeMap<AffElem, Series>) -> bool {
    let r = f.ring();
    let zero = r.zero();
    a.keys().chain(b.keys()).all(|k| {
        r.leq(&r.loc(a.get(k).unwrap_or(&zero).clone()), &r.loc(b.get(k).unwrap_or(&zero).clone()))
    })
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let rs = rs("A1");
    let mut failures = Vec::new();
    for (name, ring) in exact_rings(&rs) {
        let f = fada(ring);
        let p = Peterson::new(f.clone(), 8).map_err(|e| e.to_string())?;
        let r = f.ring();
        let xm = r.x(&lvec(&[-1]));
        let ratio = r.neg(&r.divide_x(&xm, &lvec(&[1])).ok_or("x_α does not divide x_{-α}")?);
        let w = |word: &[u8]| rs.from_word(word);
        let golden: Vec<(Vec<u8>, Vec<(Vec<u8>, Series)>)> = vec![
            (vec![0], vec![(vec![0], r.one()), (vec![1], r.one()), (vec![0, 1], r.neg(&xm))]),
            (vec![1, 0], vec![(vec![1, 0], r.one()), (vec![0, 1], ratio)]),
            (vec![0, 1, 0], vec![(vec![0, 1, 0], r.one()), (vec![1, 0, 1], r.one()), (vec![1, 0, 1, 0], r.neg(&xm))]),
        ];
        for (u, want) in golden {
            let want: BTreeMap<AffElem, Series> = want.into_iter().map(|(v, c)| (w(&v), c)).collect();
            let got = match p.expand(&w(&u)) {
                Ok(e) => e.coeffs,
                Err(e) => {
                    failures.push(format!("{name} k(𝔛_{u:?}): {e}"));
                    continue;
                }
            };
            if !same_map(&f, &got, &want) {
                failures.push(format!("{name} k(𝔛_{u:?}) = {{{}}}, expected {{{}}}", words(&f, &got), words(&f, &want)));
            }
        }
    }
    if failures.is_empty() {
        Ok("3 expansions x 3 backends".into())
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_2() -> Outcome {
    let a1 = rs("A1");
    let alpha = vector(&[1]);
    let mut rings = exact_rings(&a1);
    rings.push(("hyperbolic", Ring::series(a1.clone(), Torus::Small, FormalGroupLaw::hyperbolic(8), 8)));
    let mut coeff_01 = BTreeMap::new();
    for (name, ring) in rings {
        let f = fada(ring);
        let r = f.ring();
        let z = f.z_element(&alpha).map_err(|e| e.to_string())?;
        let coords = f.in_demazure_span(&z, 2).map_err(|e| e.to_string())?.ok_or(format!("{name}: Z_α has denominators"))?;
        let want: BTreeMap<AffElem, Series> = [
            (a1.from_word(&[0]), r.one()),
            (a1.from_word(&[1]), r.one()),
            (a1.from_word(&[0, 1]), r.neg(&r.x(&lvec(&[-1])))),
        ]
        .into_iter()
        .collect();
        ensure(same_map(&f, &coords, &want), || format!("{name}: Z_α = {{{}}}", words(&f, &coords)))?;
        coeff_01.insert(name, coords[&a1.from_word(&[0, 1])].clone());
    }
    // c = 0: the coefficient is α; c = 1: it is e^α - 1
    let add = Ring::additive(a1.clone(), Torus::Small);
    ensure(coeff_01["c=0"].poly == add.x(&lvec(&[1])).poly, || "c=0 coefficient is not α".into())?;
    let mut e = ZERO_EXP;
    e[0] = 1;
    let e_alpha_minus_1 = &Poly::monomial(e, 1) - &Poly::one();
    ensure(coeff_01["c=1"].poly == e_alpha_minus_1, || "c=1 coefficient is not e^α - 1".into())?;
    let conn = Ring::connective(a1.clone(), Torus::Small);
    let g = &coeff_01["generic c"];
    ensure(to_additive(&conn, g) == Some(add.x(&lvec(&[1])).poly), || "generic coefficient does not specialize to α".into())?;
    ensure(conn.specialize_c(g, 1).poly == e_alpha_minus_1, || "generic coefficient does not specialize to e^α - 1".into())?;
    // membership for every root of A2 and every law
    let a2 = rs("A2");
    let mut count = 0;
    for ring in [
        Ring::additive(a2.clone(), Torus::Small),
        Ring::multiplicative(a2.clone(), Torus::Small),
        Ring::connective(a2.clone(), Torus::Small),
        Ring::series(a2.clone(), Torus::Small, FormalGroupLaw::hyperbolic(6), 6),
    ] {
        let f = fada(ring);
        for a in a2.positive_roots().to_vec() {
            for root in [a, fada_core::root_system::negate(&a)] {
                let z = f.z_element(&root).map_err(|e| e.to_string())?;
                let ok = f.in_demazure_span(&z, 4).map_err(|e| e.to_string())?.is_some();
                ensure(ok, || format!("A2 Z_{root:?} has denominators"))?;
                count += 1;
            }
        }
    }
    Ok(format!("Â₁ golden on 4 laws, both specializations, {count} Â₂ memberships"))
}

fn random_s(r: &Ring, roots: &[LVec], rng: &mut ChaCha8Rng) -> Series {
    let mut acc = r.zero();
    for _ in 0..rng.gen_range(1..=3) {
        let k: i128 = rng.gen_range(-3..=3);
        let x = r.pow(&r.x(&roots[rng.gen_range(0..roots.len())]), rng.gen_range(0..=2));
        acc = r.add(&acc, &r.mul(&r.scalar(Poly::constant(k)), &x));
    }
    acc
}

fn roots_of(rs: &RootSystem) -> Vec<LVec> {
    let n = rs.rank();
    let mut out = Vec::new();
    for a in rs.positive_roots() {
        let mut v = [0; fada_core::poly::LAT];
        v[..n].copy_from_slice(&a[..n]);
        out.push(v);
        out.push(v.map(|x| -x));
    }
    out
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut summary = Vec::new();
    for (ty, window) in [("A1", 8u32), ("A2", 6)] {
        let rs = rs(ty);
        let f = fada(Ring::connective(rs.clone(), Torus::Small));
        let r = f.ring();
        let roots = roots_of(&rs);
        let table = f.eta_in_x_basis(window).map_err(|e| e.to_string())?;
        let elems = rs.elements_up_to(window);
        let duals: Vec<Dual> = elems.iter().map(|w| f.dual_x(w, &table)).collect();
        let mut checks = 0;
        for (w, d) in elems.iter().zip(&duals) {
            let rep = f.gkm_check_small(d, 2).map_err(|e| e.to_string())?;
            ensure(rep.ok(), || format!("{ty} X*_{:?}: {:?}", f.word_of(w), rep.failed.first()))?;
            checks += rep.checked;
            if rs.is_minimal(w) {
                let g = f.grassmannian_check(d, 2).map_err(|e| e.to_string())?;
                ensure(g.ok(), || format!("{ty} Grassmannian X*_{:?}", f.word_of(w)))?;
                ensure(f.is_w_invariant(d), || format!("{ty} X*_{:?} is not W-invariant", f.word_of(w)))?;
            }
        }
        for _ in 0..30 {
            let mut g = f.dual_zero(window);
            for _ in 0..rng.gen_range(1..=3) {
                let i = rng.gen_range(0..duals.len());
                g = f.dual_add(&g, &f.dual_scale(&r.loc(random_s(r, &roots, &mut rng)), &duals[i]));
            }
            let rep = f.gkm_check_small(&g, 2).map_err(|e| e.to_string())?;
            ensure(rep.ok(), || format!("{ty} combination failed: {:?}", rep.failed.first()))?;
        }
        let short: Vec<&AffElem> = elems.iter().filter(|w| rs.length(w) <= 2).collect();
        for _ in 0..50 {
            let base = &duals[rng.gen_range(0..duals.len())];
            let y = short[rng.gen_range(0..short.len())];
            let k = [-2i128, -1, 1, 2][rng.gen_range(0..4)];
            let bump = f.dual_scale(&r.loc(r.scalar(Poly::constant(k))), &f.dual_delta(y, window));
            let bad = f.dual_add(base, &bump);
            let rep = f.gkm_check_small(&bad, 2).map_err(|e| e.to_string())?;
            ensure(!rep.ok(), || format!("{ty}: perturbation at {:?} was accepted", f.word_of(y)))?;
        }
        summary.push(format!("{ty} L={window}: {} duals, {checks} checks, 30 combinations, 50 rejections", duals.len()));
    }
    Ok(summary.join("; "))
}

fn criterion_4() -> Outcome {
    let mut summary = Vec::new();
    for (ty, window) in [("A1", 8u32), ("A2", 6)] {
        let rs = rs(ty);
        let f = fada(Ring::connective(rs.clone(), Torus::Small));
        let p = Peterson::new(f.clone(), window).map_err(|e| e.to_string())?;
        let l0 = rs.w_len(rs.w0());
        let mut n = 0;
        for u in rs.elements_up_to(window - l0).into_iter().filter(|u| rs.is_minimal(u)) {
            let e = p.expand(&u).map_err(|e| format!("{ty} k(𝔛_{:?}): {e}", f.word_of(&u)))?;
            let mut z = f.zero();
            for (v, c) in &e.coeffs {
                z = f.add(&z, &f.lscale(&f.ring().loc(c.clone()), &f.basis(Family::X, v)));
            }
            ensure(p.centralizer_check(&z), || format!("{ty} k(𝔛_{:?}) does not commute with S", f.word_of(&u)))?;
            ensure(p.supported_on_translations(&z), || format!("{ty} k(𝔛_{:?}) leaves the translations", f.word_of(&u)))?;
            n += 1;
        }
        let mut m = 0;
        for v in rs.elements_up_to(window).into_iter().filter(|v| v.w != 0) {
            ensure(!p.centralizer_check(&f.basis(Family::X, &v)), || format!("{ty} X_{:?} commutes with S", f.word_of(&v)))?;
            m += 1;
        }
        summary.push(format!("{ty}: {n} centralizing expansions, {m} non-translation X_v rejected"));
    }
    Ok(summary.join("; "))
}

fn criterion_5() -> Outcome {
    let rs = rs("A1");
    let f = fada(Ring::connective(rs.clone(), Torus::Small));
    let p = Peterson::new(f.clone(), 10).map_err(|e| e.to_string())?;
    let mins: Vec<AffElem> = rs.elements_up_to(6).into_iter().filter(|u| rs.is_minimal(u)).collect();
    let mut pairs = 0;
    for u in &mins {
        for v in &mins {
            if rs.length(u) + rs.length(v) > 6 {
                continue;
            }
            let rep = p.structure_constants(u, v).map_err(|e| e.to_string())?;
            ensure(rep.holds, || format!("u={:?} v={:?}", f.word_of(u), f.word_of(v)))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn criterion_6() -> Outcome {
    let mut summary = Vec::new();
    for (ty, window) in [("A1", 8u32), ("A2", 5)] {
        let f = fada(Ring::connective(rs(ty), Torus::Small));
        let c = Connective::new(f, window).map_err(|e| e.to_string())?;
        let rep = c.full_check().map_err(|e| e.to_string())?;
        ensure(rep.ok(), || format!("{ty}: {:?}", rep.failed))?;
        summary.push(format!("{ty} L={window}: {} identities", rep.checked));
    }
    Ok(summary.join("; "))
}

fn criterion_7() -> Outcome {
    ensure(s_leq(3, 3) == vec![1, 3, 6, 10], || format!("S³_≤3 = {:?}", s_leq(3, 3)))?;
    for i in 1..=8u32 {
        for a in 0..=8i64 {
            let direct: Vec<i128> = (0..=a)
                .map(|j| {
                    let (n, k) = (j as i128 + i as i128 - 1, i as i128 - 1);
                    (0..k).fold(1i128, |acc, t| acc * (n - t) / (t + 1))
                })
                .collect();
            ensure(s_leq(i, a) == direct, || format!("binomial form at i={i} a={a}"))?;
            if i >= 2 {
                let mut shifted = vec![0i128];
                shifted.extend(s_leq(i, a - 1));
                let lower = s_leq(i - 1, a);
                let sum: Vec<i128> = (0..=a as usize).map(|j| shifted.get(j).unwrap_or(&0) + lower[j]).collect();
                ensure(sum == s_leq(i, a), || format!("recurrence at i={i} a={a}"))?;
            }
        }
    }
    let mut total = 0;
    for (name, fgl) in [
        ("c=0", FormalGroupLaw::additive()),
        ("c=1", FormalGroupLaw::multiplicative()),
        ("generic c", FormalGroupLaw::connective()),
    ] {
        let h = A1Hat::new(fgl).map_err(|e| e.to_string())?;
        let rep = h.crosscheck(4).map_err(|e| e.to_string())?;
        ensure(rep.mismatched.is_empty(), || format!("{name}: closed forms differ at k = {:?}", rep.mismatched))?;
        ensure(rep.gkm.ok(), || format!("{name}: {:?}", rep.gkm.failed.first()))?;
        let bad = h.recursion_check(4);
        ensure(bad.is_empty(), || format!("{name}: recursion fails at {bad:?}"))?;
        total += rep.matched.len();
    }
    Ok(format!("S identities for i, a ≤ 8; {total} closed forms matched"))
}

fn criterion_8() -> Outcome {
    let a2 = rs("A2");
    let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    for torus in [Torus::Small, Torus::Big] {
        let f = fada(Ring::connective(a2.clone(), torus));
        for (i, j) in pairs {
            let rep = f.braid_check(i, j).map_err(|e| e.to_string())?;
            ensure(rep.agree, || format!("connective {torus:?} ({i},{j}) differs"))?;
        }
    }
    let mut firsts = Vec::new();
    let f = fada(Ring::series(a2.clone(), Torus::Small, FormalGroupLaw::hyperbolic(6), 6));
    for (i, j) in pairs {
        let rep = f.braid_check(i, j).map_err(|e| e.to_string())?;
        ensure(!rep.agree, || format!("hyperbolic ({i},{j}) satisfies the braid relation"))?;
        let (w, d) = rep.first_difference.clone().ok_or("no difference reported")?;
        firsts.push(format!("({i},{j}) at η_{:?}: {}", f.word_of(&w), f.ring().loc_to_json(&d)));
    }
    Ok(format!("connective agrees on both tori; hyperbolic first differences {}", firsts.join(", ")))
}

fn criterion_9() -> Outcome {
    let mut n = 0;
    for (ty, max_len, degree) in [("A1", 4u32, 8u32), ("A2", 2, 6)] {
        let rs = rs(ty);
        let window = max_len + rs.w_len(rs.w0());
        let make = |ring: Ring| Peterson::new(fada(ring), window).map_err(|e| e.to_string());
        let conn = make(Ring::connective(rs.clone(), Torus::Small))?;
        let add = make(Ring::additive(rs.clone(), Torus::Small))?;
        let mult = make(Ring::multiplicative(rs.clone(), Torus::Small))?;
        let ser = make(Ring::series(rs.clone(), Torus::Small, FormalGroupLaw::connective(), degree))?;
        let b = Backends {
            connective: conn.fada().ring(),
            additive: add.fada().ring(),
            multiplicative: mult.fada().ring(),
            series: ser.fada().ring(),
        };
        let get = |p: &Peterson, m: &BTreeMap<AffElem, Series>, v: &AffElem| -> Loc {
            let r = p.fada().ring();
            r.loc(m.get(v).cloned().unwrap_or_else(|| r.zero()))
        };
        for u in rs.elements_up_to(max_len).into_iter().filter(|u| rs.is_minimal(u)) {
            let ex = |p: &Peterson| p.expand(&u).map(|e| e.coeffs).map_err(|e| e.to_string());
            let (g, a, m, s) = (ex(&conn)?, ex(&add)?, ex(&mult)?, ex(&ser)?);
            let keys: Vec<AffElem> = g.keys().chain(a.keys()).chain(m.keys()).copied().collect();
            for v in keys {
                let cert = b.certify(&get(&conn, &g, &v), &get(&add, &a, &v), &get(&mult, &m, &v), &get(&ser, &s, &v));
                ensure(cert.ok(), || format!("{ty} c_{{{:?},{:?}}}: {cert:?}", conn.fada().word_of(&u), conn.fada().word_of(&v)))?;
                n += 1;
            }
        }
        // Z_α coordinates, all roots
        let zf = [conn.fada(), add.fada(), mult.fada(), ser.fada()];
        for a in rs.positive_roots().to_vec() {
            let coords: Vec<BTreeMap<AffElem, Series>> = zf
                .iter()
                .map(|f| f.in_demazure_span(&f.z_element(&a).unwrap(), window).unwrap().unwrap())
                .collect();
            let keys: Vec<AffElem> = coords.iter().flat_map(|c| c.keys().copied()).collect();
            for v in keys {
                let l = |k: usize| zf[k].ring().loc(coords[k].get(&v).cloned().unwrap_or_else(|| zf[k].ring().zero()));
                let cert = b.certify(&l(0), &l(1), &l(2), &l(3));
                ensure(cert.ok(), || format!("{ty} Z_{a:?} at {:?}: {cert:?}", zf[0].word_of(&v)))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} coefficients certified over Z[c]"))
}

struct Ctx {
    f: Arc<Fada>,
    p: Peterson,
    table: fada_core::fada::Expansion,
    elems: Vec<AffElem>,
    roots: Vec<LVec>,
}

impl Ctx {
    fn new(ring: Ring, window: u32) -> Result<Self, String> {
        let rs = ring.root_system_arc();
        let f = fada(ring);
        let p = Peterson::new(f.clone(), window).map_err(|e| e.to_string())?;
        let table = p.table().clone();
        Ok(Ctx { roots: roots_of(&rs), elems: rs.elements_up_to(window), f, p, table })
    }

    fn s(&self, rng: &mut ChaCha8Rng) -> Series {
        random_s(self.f.ring(), &self.roots, rng)
    }

    fn elem(&self, rng: &mut ChaCha8Rng, max_len: u32) -> AffElem {
        let rs = self.f.rs();
        let pool: Vec<&AffElem> = self.elems.iter().filter(|w| rs.length(w) <= max_len).collect();
        *pool[rng.gen_range(0..pool.len())]
    }

    fn x_comb(&self, rng: &mut ChaCha8Rng, max_len: u32) -> TElem {
        let f = &self.f;
        let mut z = f.zero();
        for _ in 0..rng.gen_range(1..=2) {
            let w = self.elem(rng, max_len);
            z = f.add(&z, &f.lscale(&f.ring().loc(self.s(rng)), &f.basis(Family::X, &w)));
        }
        z
    }

    fn dual_comb(&self, rng: &mut ChaCha8Rng) -> Dual {
        let f = &self.f;
        let mut g = f.dual_zero(self.table.window);
        for _ in 0..rng.gen_range(1..=2) {
            let w = self.elem(rng, self.table.window);
            g = f.dual_add(&g, &f.dual_scale(&f.ring().loc(self.s(rng)), &f.dual_x(&w, &self.table)));
        }
        g
    }

    fn translations(&self, rng: &mut ChaCha8Rng) -> TElem {
        let f = &self.f;
        let rs = f.rs();
        let mut z = f.zero();
        for _ in 0..rng.gen_range(1..=3) {
            let mut lam = vector(&[]);
            for i in 1..=rs.rank() {
                let k = rng.gen_range(-2..=2);
                let a = rs.coroot_of(&rs.simple_root(i));
                for j in 0..rs.rank() {
                    lam[j] += k * a[j];
                }
            }
            z = f.add(&z, &f.scalar_eta(f.ring().loc(self.s(rng)), &rs.translation(lam)));
        }
        z
    }

    fn small_op(&self, rng: &mut ChaCha8Rng) -> TElem {
        let f = &self.f;
        let i = rng.gen_range(0..=f.rs().rank());
        match rng.gen_range(0..4) {
            0 => f.demazure(i),
            1 => f.eta(&f.rs().simple(i)),
            2 => f.y_elem(i),
            _ => f.scalar(f.ring().loc(self.s(rng))),
        }
    }
}

type Case = fn(&Ctx, &mut ChaCha8Rng) -> bool;

fn case_duality(c: &Ctx, rng: &mut ChaCha8Rng) -> bool {
    let f = &c.f;
    let r = f.ring();
    let (w, v) = (c.elem(rng, c.table.window), c.elem(rng, c.table.window));
    let val = f.evaluate(&f.dual_x(&w, &c.table), &f.basis(Family::X, &v)).unwrap();
    r.leq(&val, &if v == w { r.loc_one() } else { r.loc_zero() })
}

fn case_commute(c: &Ctx, rng: &mut ChaCha8Rng) -> bool {
    let f = &c.f;
    let (z1, z2, g) = (c.small_op(rng), c.small_op(rng), c.dual_comb(rng));
    let lhs = f.bullet(&z1, &f.odot(&z2, &g).unwrap()).unwrap();
    let rhs = f.odot(&z2, &f.bullet(&z1, &g).unwrap()).unwrap();
    f.dual_eq(&lhs, &rhs)
}

fn case_phi(c: &Ctx, rng: &mut ChaCha8Rng) -> bool {
    let f = &c.f;
    let r = f.ring();
    let i = rng.gen_range(0..=f.rs().rank());
    let (a, b) = (r.loc(c.s(rng)), r.loc(c.s(rng)));
    let x = f.demazure(i);
    let base = f.phi(&a, &b, 4).unwrap();
    let left = f.phi(&f.demazure_on(i, &a), &b, 4).unwrap();
    let right = f.phi(&a, &f.demazure_on(i, &b), 4).unwrap();
    f.dual_eq(&left, &f.odot(&x, &base).unwrap()) && f.dual_eq(&right, &f.bullet(&x, &base).unwrap())
}

fn case_pr_k(c: &Ctx, rng: &mut ChaCha8Rng) -> bool {
    let (f, p) = (&c.f, &c.p);
    let z = c.translations(rng);
    let y = c.x_comb(rng, 3);
    let i = rng.gen_range(1..=f.rs().rank());
    f.equal(&p.pr(&p.k(&z).unwrap()), &z) && p.pr(&f.mul_x(&y, i)).is_zero()
}

fn case_pr_star(c: &Ctx, rng: &mut ChaCha8Rng) -> bool {
    let (f, p) = (&c.f, &c.p);
    let r = f.ring();
    let gz = c.translations(rng);
    let g: BTreeMap<_, Loc> = gz.terms.iter().map(|(w, l)| (w.lam, l.clone())).collect();
    let lifted = f.pr_star(&g, c.table.window);
    let z = c.x_comb(rng, c.table.window);
    r.leq(&f.evaluate(&lifted, &z).unwrap(), &p.pair_translations(&g, &p.pr(&z)))
}

fn case_hopf(c: &Ctx, rng: &mut ChaCha8Rng) -> bool {
    let (f, p) = (&c.f, &c.p);
    let r = f.ring();
    let (z1, z2) = (c.translations(rng), c.translations(rng));
    let lhs = p.coproduct(&f.mul(&z1, &z2));
    let rhs = p.tensor_mul(&p.coproduct(&z1), &p.coproduct(&z2));
    let zero = r.loc_zero();
    p.hopf_check(&z1)
        && f.equal(&p.antipode(&p.antipode(&z1)), &z1)
        && lhs.keys().chain(rhs.keys()).all(|k| r.leq(lhs.get(k).unwrap_or(&zero), rhs.get(k).unwrap_or(&zero)))
}

fn case_unit(c: &Ctx, rng: &mut ChaCha8Rng) -> bool {
    let f = &c.f;
    let g = c.dual_comb(rng);
    let (w, v) = (c.elem(rng, 4), c.elem(rng, 4));
    let prod = f.dual_mul(&f.dual_delta(&w, 4), &f.dual_delta(&v, 4));
    let want = if w == v { f.dual_delta(&w, 4) } else { f.dual_zero(4) };
    f.dual_eq(&f.dual_mul(&f.dual_unit(g.window), &g), &g) && f.dual_eq(&prod, &want)
}

fn case_cocycle(c: &Ctx, rng: &mut ChaCha8Rng) -> bool {
    let r = c.f.ring();
    let rs = c.f.rs();
    let (u, v, s) = (c.elem(rng, 4), c.elem(rng, 4), c.s(rng));
    r.act(&rs.mul(&u, &v), &s) == r.act(&u, &r.act(&v, &s))
}

fn case_assoc(c: &Ctx, rng: &mut ChaCha8Rng) -> bool {
    let f = &c.f;
    let (a, b, z) = (c.x_comb(rng, 2), c.x_comb(rng, 2), c.x_comb(rng, 2));
    f.equal(&f.mul(&f.mul(&a, &b), &z), &f.mul(&a, &f.mul(&b, &z)))
}

fn criterion_10() -> Outcome {
    let ctxs = [
        ("A1", Ctx::new(Ring::connective(rs("A1"), Torus::Small), 6)?),
        ("A2", Ctx::new(Ring::multiplicative(rs("A2"), Torus::Small), 4)?),
    ];
    let cases: [(&str, Case); 9] = [
        ("duality", case_duality),
        ("bullet/odot", case_commute),
        ("phi", case_phi),
        ("pr k", case_pr_k),
        ("pr*", case_pr_star),
        ("hopf", case_hopf),
        ("dual unit", case_unit),
        ("cocycle", case_cocycle),
        ("associativity", case_assoc),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut n = 0;
    for (ty, c) in &ctxs {
        for (name, case) in cases {
            for k in 0..30 {
                ensure(case(c, &mut rng), || format!("{ty} {name} case {k}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} seeded cases"))
}

fn main() {
    let criteria: [(fn() -> Outcome, u64); 10] = [
        (criterion_1, 10),
        (criterion_2, 5),
        (criterion_3, 120),
        (criterion_4, 60),
        (criterion_5, 60),
        (criterion_6, 120),
        (criterion_7, 60),
        (criterion_8, 30),
        (criterion_9, 120),
        (criterion_10, 180),
    ];
    let mut failed = 0;
    for (k, (run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let out = match out {
            Ok(s) if took > Duration::from_secs(limit) => Err(format!("{s}, but over the {limit}s limit")),
            o => o,
        };
        match out {
            Ok(s) => println!("criterion {}: PASS ({:.2}s) {s}", k + 1, took.as_secs_f64()),
            Err(s) => {
                failed += 1;
                println!("criterion {}: FAIL ({:.2}s) {s}", k + 1, took.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
