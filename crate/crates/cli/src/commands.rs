//! The commands behind the CLI, each returning a document or a report.

use std::path::Path;
use std::str::FromStr;

use mfpush::chern::{
    cardy_check, chern_character, chern_of_pushforward_routes, euler_chi_residue, hom_cohomology, jacobi_frame,
    truncation_oracle,
};
use mfpush::connection::{Grading, TAdicFrame};
use mfpush::convolution::{
    chern_convolution, convolve, knorrer_kappa_check, knorrer_round_trip, Kernel,
};
use mfpush::error::Error;
use mfpush::mf::{default_degree_bound, find_homotopy, MFMap, MF};
use mfpush::pmat::PMat;
use mfpush::poly::format_q;
use mfpush::pushforward::{check_idempotent, idempotent, split_over_point};
use mfpush::residue::{residue_trace, residue_transform, ResidueQuery};
use mfpush::{MonomialOrder, Poly, QMat, Ring, RingRef, Q};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::doc::{MFDocument, NamedFactorisation, RingOverrides};
use crate::error::{at, CliError, CliResult};
use crate::report::Report;
use crate::{Cli, Command, Flags};

pub enum Body {
    Document(MFDocument),
    Report(Report),
}

/// The result of a command: what to print, and verification failures that
/// turn the exit code to 4 while still printing the report.
pub struct Output {
    pub body: Body,
    pub diagnostics: Vec<String>,
}

impl Output {
    fn report(r: Report) -> Output {
        Output { body: Body::Report(r), diagnostics: vec![] }
    }

    fn document(d: MFDocument) -> Output {
        Output { body: Body::Document(d), diagnostics: vec![] }
    }

    fn fail_unless(mut self, ok: bool, what: &str) -> Output {
        if !ok {
            self.diagnostics.push(format!("verification failed: {what}"));
        }
        self
    }

    pub fn exit_code(&self) -> i32 {
        if self.diagnostics.is_empty() {
            0
        } else {
            4
        }
    }

    pub fn render(&self, json: bool) -> String {
        match (&self.body, json) {
            (Body::Document(d), false) => d.to_text(),
            (Body::Document(d), true) => d.to_json(),
            (Body::Report(r), false) => r.to_text(),
            (Body::Report(r), true) => r.to_json(),
        }
    }
}

pub fn execute(cli: &Cli) -> CliResult<Output> {
    let f = &cli.flags;
    match &cli.command {
        Command::Check { file } => check(&load(file, f)?),
        Command::Tensor { file, a, b, name } => {
            let d = load(file, f)?;
            let t = at(d.factorisation(a)?.tensor(d.factorisation(b)?), "tensor")?;
            Ok(Output::document(MFDocument::single(name.as_deref().unwrap_or(&format!("{a}_{b}")), &t)))
        }
        Command::Dual { file, factorisation, name } => {
            let d = load(file, f)?;
            let x = d.pick(factorisation.as_deref())?;
            let default = format!("{}_dual", x.name);
            Ok(Output::document(MFDocument::single(name.as_deref().unwrap_or(&default), &x.mf.dual())))
        }
        Command::Hom { file, a, b, name } => {
            let d = load(file, f)?;
            let h = at(d.factorisation(a)?.hom(d.factorisation(b)?), "hom")?;
            Ok(Output::document(MFDocument::single(name.as_deref().unwrap_or(&format!("Hom_{a}_{b}")), &h)))
        }
        Command::Milnor { file, potential, vars } => milnor(file.as_deref(), potential.as_deref(), vars.as_deref(), f),
        Command::Residue { vars, base, t, numerator, r, dt } => residue(vars, base, t, numerator, r, *dt, f),
        Command::Chern { file, factorisation } => {
            let d = load(file, f)?;
            let x = d.pick(factorisation.as_deref())?;
            let c = at(chern_character(&x.mf), "chern")?;
            Ok(Output::report(
                Report::new().field("factorisation", x.name.as_str()).field("chern", c.to_string()).bare("chern"),
            ))
        }
        Command::Euler { file, a, b } => euler(&load(file, f)?, a, b),
        Command::Cardy { file, a, b, alpha, beta } => cardy(&load(file, f)?, a, b, alpha.as_deref(), beta.as_deref()),
        Command::Pushforward { file, factorisation, integrate, t } => {
            pushforward(&load(file, f)?, factorisation.as_deref(), integrate, t, f)
        }
        Command::Fuse { file, f: fname, e: ename } => fuse(&load(file, f)?, fname, ename, f),
        Command::Knorrer { file, factorisation, u, v } => knorrer(&load(file, f)?, factorisation.as_deref(), u, v),
        Command::Selftest { seed } => selftest(*seed),
    }
}

// ---------------------------------------------------------------- helpers

fn overrides(f: &Flags) -> CliResult<RingOverrides> {
    let order = match &f.order {
        Some(o) => Some(
            MonomialOrder::parse(o).ok_or_else(|| CliError::Usage(format!("unknown monomial order `{o}`")))?,
        ),
        None => None,
    };
    Ok(RingOverrides { order, characteristic: f.characteristic })
}

fn load(path: &Path, f: &Flags) -> CliResult<MFDocument> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    MFDocument::parse(&text, overrides(f)?).map_err(|e| e.context(&path.display().to_string()))
}

fn list(s: &str) -> Vec<String> {
    s.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect()
}

fn ring_from_flags(names: &[String], f: &Flags) -> CliResult<RingRef> {
    let ov = overrides(f)?;
    at(
        Ring::with_options(names, ov.order.unwrap_or(MonomialOrder::DegRevLex), ov.characteristic.unwrap_or(0)),
        "ring",
    )
}

fn poly(s: &str, ring: &RingRef, what: &str) -> CliResult<Poly> {
    at(Poly::parse(s, ring), what)
}

fn weights(f: &Flags, n: usize) -> CliResult<Option<Vec<Q>>> {
    let Some(w) = &f.weights else { return Ok(None) };
    let ws: Vec<Q> = list(w)
        .iter()
        .map(|s| Q::from_str(s).map_err(|_| CliError::Usage(format!("bad weight `{s}`"))))
        .collect::<CliResult<_>>()?;
    if ws.len() != n {
        return Err(CliError::Usage(format!("{} weights for {n} integrated variables", ws.len())));
    }
    Ok(Some(ws))
}

/// A frame with the requested weights, else automatic weights, else a bounded expansion.
fn frame(ring: &RingRef, ys: &[String], t: &[Poly], f: &Flags) -> CliResult<TAdicFrame> {
    let names: Vec<&str> = ys.iter().map(|s| s.as_str()).collect();
    if let Some(w) = weights(f, ys.len())? {
        return at(TAdicFrame::new(ring, &names, t, Grading::Weights(w)), "frame");
    }
    match TAdicFrame::new(ring, &names, t, Grading::Auto) {
        Err(Error::UnsupportedConnection(_)) => {
            let maxdeg = t.iter().filter_map(|p| p.total_degree()).max().unwrap_or(1) as usize;
            let b = f.degree_bound.map_or(2 * maxdeg, |b| b as usize);
            at(TAdicFrame::new(ring, &names, t, Grading::Bound(b)), "frame")
        }
        r => at(r, "frame"),
    }
}

fn q_str(c: &Q) -> String {
    format_q(c)
}

fn qmat_json(m: &QMat) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|c| Value::String(q_str(c))).collect()))
            .collect(),
    )
}

fn pmat_json(m: &PMat) -> Value {
    json!(m.to_strings())
}

fn ranks(x: &MF) -> Value {
    json!([x.r0(), x.r1()])
}

/// A polynomial as a factor: parenthesised when it has several terms.
fn factor_text(p: &Poly) -> String {
    if p.nterms() > 1 {
        format!("({p})")
    } else {
        p.to_string()
    }
}

// ---------------------------------------------------------------- commands

fn check(d: &MFDocument) -> CliResult<Output> {
    let facts: Vec<Value> = d
        .factorisations
        .iter()
        .map(|f| {
            json!({
                "name": f.name,
                "ranks": ranks(&f.mf),
                "potential": f.mf.potential().to_string(),
                "status": format!("d²={}·I verified", factor_text(f.mf.potential())),
            })
        })
        .collect();
    let maps: Vec<Value> = d
        .maps
        .iter()
        .map(|m| {
            json!({
                "name": m.name,
                "source": m.source,
                "target": m.target,
                "parity": if m.map.odd { "odd" } else { "even" },
                "commutes with d": m.map.is_morphism(),
            })
        })
        .collect();
    let mut r = Report::new().field("factorisations", facts);
    if !maps.is_empty() {
        r.push("maps", maps);
    }
    Ok(Output::report(r))
}

fn milnor(file: Option<&Path>, potential: Option<&str>, vars: Option<&str>, f: &Flags) -> CliResult<Output> {
    let w = match (file, potential) {
        (Some(p), None) => load(p, f)?.potential,
        (None, Some(w)) => {
            let vs = list(vars.ok_or_else(|| CliError::Usage("--potential needs --vars".into()))?);
            let ring = ring_from_flags(&vs, f)?;
            poly(w, &ring, "potential")?
        }
        _ => return Err(CliError::Usage("give either a document or --potential".into())),
    };
    let fr = at(jacobi_frame(&w), "Jacobi algebra")?;
    let qa = fr.quotient();
    let basis: Vec<String> = (0..qa.dim()).map(|i| qa.basis_poly(i).to_string()).collect();
    Ok(Output::report(
        Report::new()
            .field("potential", w.to_string())
            .field("mu", qa.dim())
            .field("basis", basis),
    ))
}

fn residue(
    vars: &str,
    base: &str,
    t: &[String],
    numerator: &str,
    r: &[String],
    dt: bool,
    f: &Flags,
) -> CliResult<Output> {
    let ys = list(vars);
    let mut names = list(base);
    names.extend(ys.iter().cloned());
    let ring = ring_from_flags(&names, f)?;
    if t.len() != ys.len() {
        return Err(CliError::Usage(format!("{} denominators for {} variables", t.len(), ys.len())));
    }
    let tp: Vec<Poly> = t.iter().enumerate().map(|(i, s)| poly(s, &ring, &format!("t_{}", i + 1))).collect::<CliResult<_>>()?;
    let s = poly(numerator, &ring, "numerator")?;
    let fr = frame(&ring, &ys, &tp, f)?;
    let (q, form) = if dt {
        (ResidueQuery::dt(&fr, s), "dt".to_string())
    } else if r.is_empty() {
        (at(ResidueQuery::dy(&fr, s), "residue")?, "dy".to_string())
    } else {
        let rp: Vec<Poly> = r
            .iter()
            .enumerate()
            .map(|(i, x)| poly(x, &ring, &format!("r_{}", i + 1)))
            .collect::<CliResult<_>>()?;
        let form = format!("d({})", rp.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(")∧d("));
        (at(ResidueQuery::new(&fr, s, rp), "residue")?, form)
    };
    let a = at(residue_trace(&q), "trace formula")?;
    let b = at(residue_transform(&q), "transformation law")?;
    let out = Output::report(
        Report::new()
            .field("form", form)
            .field("mu", fr.mu())
            .field("residue", a.to_string())
            .field("trace formula", a.to_string())
            .field("transformation law", b.to_string()),
    );
    Ok(out.fail_unless(a == b, "trace formula and transformation law disagree"))
}

fn euler(d: &MFDocument, a: &str, b: &str) -> CliResult<Output> {
    let (x, y) = (d.factorisation(a)?, d.factorisation(b)?);
    let chi = at(euler_chi_residue(x, y), "euler")?;
    let oracle = at(truncation_oracle(x, y), "truncation oracle")?;
    let model = at(hom_cohomology(x, y), "finite model")?;
    let chi_oracle = Q::from_integer((oracle.0 as i64 - oracle.1 as i64).into());
    let out = Output::report(
        Report::new()
            .field("chi (residue)", q_str(&chi))
            .field("chi (oracle)", q_str(&chi_oracle))
            .field("hom dims (oracle)", json!([oracle.0, oracle.1]))
            .field("hom dims (model)", json!([model.0, model.1])),
    );
    Ok(out
        .fail_unless(chi == chi_oracle, "χ by residues differs from the oracle")
        .fail_unless(model == oracle, "model dimensions differ from the oracle"))
}

fn endomorphism(d: &MFDocument, name: Option<&str>, x: &MF) -> CliResult<MFMap> {
    match name {
        Some(n) => Ok(d.map(n)?.clone()),
        None => Ok(x.identity()),
    }
}

fn cardy(d: &MFDocument, a: &str, b: &str, alpha: Option<&str>, beta: Option<&str>) -> CliResult<Output> {
    let (x, y) = (d.factorisation(a)?, d.factorisation(b)?);
    let al = endomorphism(d, alpha, x)?;
    let be = endomorphism(d, beta, y)?;
    let (l, r) = at(cardy_check(x, y, &al, &be), "cardy")?;
    let out = Output::report(
        Report::new().field("cohomology supertrace", q_str(&l)).field("residue pairing", q_str(&r)),
    );
    Ok(out.fail_unless(l == r, "the two sides of the Cardy condition differ"))
}

fn pushforward(d: &MFDocument, name: Option<&str>, integrate: &str, t: &[String], f: &Flags) -> CliResult<Output> {
    let x = &d.pick(name)?.mf;
    let ys = list(integrate);
    if t.len() != ys.len() {
        return Err(CliError::Usage(format!("{} generators t for {} integrated variables", t.len(), ys.len())));
    }
    let ring = x.ring();
    let tp: Vec<Poly> = t.iter().enumerate().map(|(i, s)| poly(s, ring, &format!("t_{}", i + 1))).collect::<CliResult<_>>()?;
    let fr = frame(ring, &ys, &tp, f)?;
    let bound = f.degree_bound.unwrap_or_else(|| default_degree_bound(x));
    let mut lambdas = Vec::new();
    for (i, ti) in tp.iter().enumerate() {
        let m = MFMap::new_unchecked(x, x, false, PMat::scalar(ti, x.rank()));
        match at(find_homotopy(&m, bound), "homotopy search")?.witness() {
            Some(h) => lambdas.push(h.clone()),
            None => {
                return Err(CliError::Precondition(format!(
                    "t_{} = {ti} does not act null-homotopically within degree bound {bound}",
                    i + 1
                )))
            }
        }
    }
    let model = at(idempotent(x, &fr, &lambdas), "idempotent")?;
    let rec = at(check_idempotent(&model, bound), "idempotent check")?;
    let witness = if rec.exact {
        "e² = e exactly".to_string()
    } else if rec.witness.witness().is_some() {
        format!("e² − e null-homotopic (witness within degree {bound})")
    } else {
        format!("no witness for e² − e within degree {bound}")
    };
    let mut r = Report::new()
        .field("integrated", ys.clone())
        .field("t", tp.iter().map(|p| p.to_string()).collect::<Vec<_>>())
        .field("mu", fr.mu())
        .field("model ranks", ranks(&model.reduced))
        .field("e strict", model.strict)
        .field("idempotent", witness)
        .field("e", pmat_json(&model.e.m));
    if fr.base_ring().nvars() == 0 {
        let s = at(split_over_point(&model), "split")?;
        r.push("cohomology of X/tX", json!([s.cohomology.0, s.cohomology.1]));
        r.push("pushforward dims", json!([s.pushforward.0, s.pushforward.1]));
    }
    let mut agree = true;
    if let Ok((a, b)) = chern_of_pushforward_routes(x, &model, None) {
        r.push("chern (e-route)", a.to_string());
        r.push("chern (residue route)", b.to_string());
        agree = a == b;
    }
    Ok(Output::report(r)
        .fail_unless(model.strict, "e does not commute with the differential")
        .fail_unless(agree, "the two Chern routes disagree"))
}

/// The kernel a document factorisation describes, over its own variables.
fn kernel(d: &MFDocument, name: &str, f: &Flags) -> CliResult<(Kernel, NamedFactorisation)> {
    let nf = d.named(name)?;
    let what = format!("kernel `{name}`");
    let (ins, outs) = match (&nf.inputs, &nf.outputs) {
        (Some(i), Some(o)) => (i.clone(), o.clone()),
        _ => return Err(CliError::Usage(format!("{what} needs `inputs:` and `outputs:`"))),
    };
    let names: Vec<String> =
        d.ring.vars().iter().filter(|v| ins.contains(v) || outs.contains(v)).cloned().collect();
    let ov = overrides(f)?;
    let ring = at(
        Ring::with_options(&names, ov.order.unwrap_or(d.ring.order()), d.ring.characteristic()),
        &what,
    )?;
    let mf = at(nf.mf.to_ring(&ring), &what)?;
    let w = mf.potential();
    let mut w_in = Poly::zero(&ring);
    let mut w_out = Poly::zero(&ring);
    for (m, c) in w.raw_terms() {
        let term = Poly::monomial(&ring, m.clone(), c.clone());
        let uses = |vs: &[String]| (0..ring.nvars()).any(|i| m[i] > 0 && vs.contains(&ring.vars()[i]));
        match (uses(&ins), uses(&outs)) {
            (true, true) => {
                return Err(CliError::Precondition(format!(
                    "{what}: potential term {term} mixes inputs and outputs"
                )))
            }
            (true, false) => w_in = &w_in - &term,
            _ => w_out = &w_out + &term,
        }
    }
    let i: Vec<&str> = ins.iter().map(|s| s.as_str()).collect();
    let o: Vec<&str> = outs.iter().map(|s| s.as_str()).collect();
    let k = at(Kernel::new(&mf, &i, &o, &w_in, &w_out), &what)?;
    Ok((k, nf.clone()))
}

fn fuse(d: &MFDocument, fname: &str, ename: &str, flags: &Flags) -> CliResult<Output> {
    let (f, _) = kernel(d, fname, flags)?;
    let (e, _) = kernel(d, ename, flags)?;
    let c = at(convolve(&f, &e), "convolution")?;
    let m = &c.model;
    let bound = flags.degree_bound.unwrap_or_else(|| default_degree_bound(&m.reduced));
    let rec = at(check_idempotent(m, bound), "idempotent check")?;
    let (cor, er) = at(chern_convolution(&f, &e), "chern")?;
    let found = rec.exact || rec.witness.witness().is_some();
    let r = Report::new()
        .field("inputs", c.tensor.x.clone())
        .field("middle", c.tensor.y.clone())
        .field("outputs", c.tensor.z.clone())
        .field("potential", m.reduced.potential().to_string())
        .field("mu", m.frame.mu())
        .field("model ranks", ranks(&m.reduced))
        .field("rank F · rank E · mu", f.mf.rank() * e.mf.rank() * m.frame.mu())
        .field("e strict", m.strict)
        .field("e² − e witness", if found { format!("found within degree {bound}") } else { format!("none within degree {bound}") })
        .field("chern (residue route)", cor.to_string())
        .field("chern (e-route)", er.to_string())
        .field("e", pmat_json(&m.e.m));
    Ok(Output::report(r)
        .fail_unless(m.strict, "e does not commute with the differential")
        .fail_unless(cor == er, "the two Chern routes disagree"))
}

fn knorrer(d: &MFDocument, name: Option<&str>, u: &str, v: &str) -> CliResult<Output> {
    let x = &d.pick(name)?.mf;
    let rep = at(knorrer_round_trip(x, u, v), "knorrer")?;
    let kap = at(knorrer_kappa_check(x, u, v), "knorrer")?;
    let row = |r: &[Q; 4]| Value::Array(r.iter().map(|c| Value::String(q_str(c))).collect());
    let r = Report::new()
        .field("X ranks", ranks(x))
        .field("model ranks", ranks(&rep.model.reduced))
        .field("e strict", rep.model.strict)
        .field("e = 1_X ⊗ [[1,0,0,1],0,0,0]", rep.e_matches)
        .field("splitting maps", rep.splitting_maps)
        .field("stripped ranks", ranks(&rep.stripped))
        .field("isomorphism", rep.iso.as_ref().map_or(Value::Null, qmat_json))
        .field("kappa", row(&kap.kappa_row))
        .field("kappa (literal order)", row(&kap.reversed_row))
        .field("f∘theta", row(&kap.f_theta_row))
        .field("kappa realizes the splitting", kap.realizes_split);
    Ok(Output::report(r)
        .fail_unless(rep.model.strict && rep.e_matches, "Knörrer idempotent")
        .fail_unless(rep.splitting_maps, "splitting maps")
        .fail_unless(rep.iso.is_some(), "stripped splitting is not isomorphic to X"))
}

fn selftest(seed: u64) -> CliResult<Output> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let suites = at(mfpush::suites::selftest(&mut rng), "selftest")?;
    let mut r = Report::new().field("seed", seed);
    let mut out_diag = Vec::new();
    for (name, s) in &suites {
        r.push(name, format!("{} checks, {}", s.checks, if s.passed() { "pass" } else { "FAIL" }));
        out_diag.extend(s.failures.iter().map(|m| format!("{name}: {m}")));
    }
    let mut out = Output::report(r);
    let ok = out_diag.is_empty();
    out.diagnostics.extend(out_diag);
    Ok(out.fail_unless(ok, "self-test"))
}
