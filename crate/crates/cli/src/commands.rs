use rayon::prelude::*;
use serde_json::{json, Value};

use fada_core::a1hat::A1Hat;
use fada_core::connective::Connective;
use fada_core::fada::{Fada, Family};
use fada_core::fga::Torus;
use fada_core::formal_group::FormalGroupLaw;
use fada_core::peterson::Peterson;
use fada_core::root_system::AffElem;

use crate::config::{ConfigError, JobConfig};

/// A finished command: the JSON body and whether every check passed.
pub struct Output {
    pub ok: bool,
    pub body: Value,
}

type Run = Result<Output, ConfigError>;

fn torus_name(t: Torus) -> &'static str {
    match t {
        Torus::Small => "small",
        Torus::Big => "big",
    }
}

fn sorted(f: &Fada, elems: impl IntoIterator<Item = AffElem>) -> Vec<AffElem> {
    let rs = f.rs();
    let mut v: Vec<AffElem> = elems.into_iter().collect();
    v.sort_by_key(|w| (rs.length(w), rs.reduced_word(w)));
    v
}

fn check_window(cfg: &JobConfig, need: u32, what: &str) -> Result<(), ConfigError> {
    if need > cfg.window {
        return Err(ConfigError::field("--window", format!("{what} needs window {need}, got {}", cfg.window)));
    }
    Ok(())
}

fn expand_one(cfg: &JobConfig, torus: Torus, family: Family) -> Result<(bool, Value), ConfigError> {
    let f = cfg.fada_on(torus);
    let r = f.ring();
    let table = f.eta_in_basis(family, cfg.window)?;
    let rows: Vec<(Value, bool)> = sorted(&f, table.rows.keys().copied())
        .par_iter()
        .map(|w| {
            let row = &table.rows[w];
            let mut z = f.zero();
            for (v, b) in row {
                z = f.add(&z, &f.lscale(&r.loc(b.clone()), &f.basis(family, v)));
            }
            let ok = f.equal(&z, &f.eta(w));
            let coeffs: Vec<Value> =
                sorted(&f, row.keys().copied()).iter().map(|v| json!([f.word_of(v), r.to_json(&row[v])])).collect();
            let basis = f.to_json(&f.basis(family, w));
            (json!({ "w": f.word_of(w), "eta_in_basis": coeffs, "basis_in_eta": basis["terms"] }), ok)
        })
        .collect();
    let ok = rows.iter().all(|(_, ok)| *ok);
    let rows: Vec<Value> = rows.into_iter().map(|(v, _)| v).collect();
    Ok((ok, json!({ "torus": torus_name(torus), "backend": r.backend().name(), "rows": rows })))
}

pub fn expand(cfg: &JobConfig, family: Family) -> Run {
    let mut ok = true;
    let mut tables = Vec::new();
    for torus in [Torus::Small, Torus::Big] {
        let (good, t) = expand_one(cfg, torus, family)?;
        ok &= good;
        tables.push(t);
    }
    Ok(Output { ok, body: json!({ "basis": family_name(family), "window": cfg.window, "tables": tables }) })
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::X => "X",
        Family::Y => "Y",
    }
}

pub fn gkm(cfg: &JobConfig, max_power: u32) -> Run {
    let f = cfg.fada();
    let rs = f.rs();
    let table = f.eta_in_x_basis(cfg.window)?;
    let elems = sorted(&f, rs.elements_up_to(cfg.window));
    let results: Vec<Result<Value, fada_core::Error>> = elems
        .par_iter()
        .map(|w| {
            let d = f.dual_x(w, &table);
            let rep = match cfg.torus {
                Torus::Small => f.gkm_check_small(&d, max_power)?,
                Torus::Big => f.gkm_check_big(&d)?,
            };
            let mut v = json!({ "w": f.word_of(w), "gkm": rep });
            if cfg.torus == Torus::Small && rs.is_minimal(w) {
                let g = f.grassmannian_check(&d, max_power)?;
                v["grassmannian"] = json!(g);
                v["w_invariant"] = json!(f.is_w_invariant(&d));
            }
            Ok(v)
        })
        .collect();
    let mut ok = true;
    let mut duals = Vec::new();
    for r in results {
        let v = r?;
        let passed = |k: &str| v.get(k).is_none_or(|g| g["failed"].as_array().is_some_and(|a| a.is_empty()));
        ok &= passed("gkm") && passed("grassmannian") && v.get("w_invariant").is_none_or(|b| b == true);
        duals.push(v);
    }
    let body = json!({
        "torus": torus_name(cfg.torus),
        "window": cfg.window,
        "max_power": max_power,
        "duals": duals,
    });
    Ok(Output { ok, body })
}

pub fn peterson(cfg: &JobConfig, u: Option<&str>, structure: bool) -> Run {
    if cfg.torus != Torus::Small {
        return Err(ConfigError::field("--torus", "the Peterson subalgebra lives on the small torus"));
    }
    let f = cfg.fada();
    let rs = f.rs();
    let l0 = rs.w_len(rs.w0());
    let us: Vec<AffElem> = match u {
        Some(word) => {
            let u = cfg.element("--u", word)?;
            if !rs.is_minimal(&u) {
                return Err(ConfigError::field("--u", "not a minimal coset representative"));
            }
            check_window(cfg, rs.length(&u) + l0, "this expansion")?;
            vec![u]
        }
        None => {
            check_window(cfg, l0, "the Peterson table")?;
            sorted(&f, rs.elements_up_to(cfg.window - l0).into_iter().filter(|u| rs.is_minimal(u)))
        }
    };
    let p = Peterson::new(f.clone(), cfg.window)?;
    let mut ok = true;
    let mut expansions = Vec::new();
    for u in &us {
        let e = p.expand(u)?;
        let mut z = f.zero();
        for (v, c) in &e.coeffs {
            z = f.add(&z, &f.lscale(&f.ring().loc(c.clone()), &f.basis(Family::X, v)));
        }
        let central = p.centralizer_check(&z) && p.supported_on_translations(&z);
        ok &= central;
        let mut v = p.expansion_to_json(&e);
        v["centralizer"] = json!(central);
        expansions.push(v);
    }
    let mut body = json!({ "window": cfg.window, "expansions": expansions });
    if structure {
        let budget = cfg.window - l0;
        let mins: Vec<AffElem> = sorted(&f, rs.elements_up_to(budget).into_iter().filter(|u| rs.is_minimal(u)));
        let mut pairs = Vec::new();
        for u in &us {
            for v in &mins {
                if rs.length(u) + rs.length(v) > budget {
                    continue;
                }
                let rep = p.structure_constants(u, v)?;
                ok &= rep.holds;
                pairs.push(json!({ "u": f.word_of(u), "v": f.word_of(v), "holds": rep.holds }));
            }
        }
        body["structure_constants"] = json!(pairs);
    }
    Ok(Output { ok, body })
}

pub fn recurse(cfg: &JobConfig, family: Family, step: Option<(usize, &str)>) -> Run {
    let f = cfg.fada();
    let c = Connective::new(f.clone(), cfg.window)?;
    let r = f.ring();
    let rs = f.rs();
    match step {
        Some((i, word)) => {
            if i > rs.rank() {
                return Err(ConfigError::field("--i", format!("{i} is not a simple index")));
            }
            let v = cfg.element("--v", word)?;
            let siv = rs.mul(&rs.simple(i), &v);
            if rs.length(&siv) != rs.length(&v) + 1 {
                return Err(ConfigError::field("--v", format!("s_{i} is a left descent of {:?}", f.word_of(&v))));
            }
            check_window(cfg, rs.length(&siv), "this step")?;
            let table = c.table(family);
            let got = c.recursion_step(family, i, &table.rows[&v]);
            let want = &table.rows[&siv];
            let zero = r.zero();
            let ok = got.keys().chain(want.keys()).all(|k| {
                r.leq(&r.loc(got.get(k).unwrap_or(&zero).clone()), &r.loc(want.get(k).unwrap_or(&zero).clone()))
            });
            let row: Vec<Value> =
                sorted(&f, got.keys().copied()).iter().map(|x| json!([f.word_of(x), r.to_json(&got[x])])).collect();
            let body = json!({
                "basis": family_name(family),
                "i": i,
                "v": f.word_of(&v),
                "w": f.word_of(&siv),
                "row": row,
                "matches_solve": ok,
            });
            Ok(Output { ok, body })
        }
        None => {
            check_window(cfg, rs.w_len(rs.w0()) + 1, "the identity checks")?;
            let rec = c.recursion_check(family);
            let full = c.full_check()?;
            let ok = rec.ok() && full.ok();
            let body = json!({
                "basis": family_name(family),
                "window": cfg.window,
                "recursion": rec,
                "identities": full,
            });
            Ok(Output { ok, body })
        }
    }
}

/// `c` is `0`, `1` or `generic`.
pub fn a1hat(kmax: u32, c: &str, check: bool) -> Run {
    let law = match c {
        "0" => FormalGroupLaw::additive(),
        "1" => FormalGroupLaw::multiplicative(),
        "generic" => FormalGroupLaw::connective(),
        other => return Err(ConfigError::field("--c", format!("'{other}' is not 0, 1 or generic"))),
    };
    let h = A1Hat::new(law)?;
    let f = h.fada();
    let r = f.ring();
    let table = h.closed_table(kmax);
    let mut rows = Vec::new();
    for k in -(kmax as i64)..=kmax as i64 {
        let w = h.sigma(k);
        let row = &table.rows[&w];
        let coeffs: Vec<Value> =
            sorted(f, row.keys().copied()).iter().map(|v| json!([h.index_of(v), r.to_json(&row[v])])).collect();
        rows.push(json!({ "k": k, "word": f.word_of(&w), "eta_in_x": coeffs }));
    }
    let mut body = json!({ "kmax": kmax, "c": c, "mu": r.to_json(h.mu()), "rows": rows });
    let mut ok = true;
    if check {
        let cross = h.crosscheck(kmax)?;
        let rec = h.recursion_check(kmax);
        ok = cross.ok() && rec.is_empty();
        body["crosscheck"] = json!(cross);
        body["recursion_failures"] = json!(rec);
    }
    Ok(Output { ok, body })
}

pub fn braid_check(cfg: &JobConfig, pair: Option<(usize, usize)>) -> Run {
    let f = cfg.fada();
    let rs = f.rs();
    let n = rs.rank();
    let pairs: Vec<(usize, usize)> = match pair {
        Some(p) => vec![p],
        None => (0..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).filter(|&(i, j)| rs.coxeter_m(i, j).is_some()).collect(),
    };
    let mut ok = true;
    let mut reports = Vec::new();
    for (i, j) in pairs {
        let rep = f.braid_check(i, j)?;
        ok &= rep.agree;
        let mut v = json!({ "i": i, "j": j, "order": rep.order, "agree": rep.agree });
        if let Some((w, d)) = &rep.first_difference {
            v["first_difference"] = json!({ "eta": f.word_of(w), "coefficient": f.ring().loc_to_json(d) });
        }
        reports.push(v);
    }
    Ok(Output { ok, body: json!({ "backend": f.ring().backend().name(), "pairs": reports }) })
}

/// One `path = value` line per leaf, in JSON order.
pub fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object()) => {
            for (k, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{k}]"), x, out);
            }
        }
        other => out.push(format!("{prefix} = {other}")),
    }
}
