//! Invariant suites over fixed and seeded random families, shared by the
//! self-test and the acceptance checks.

use rand::Rng;

use crate::chern::{
    alternative_homotopies, cardy_check, euler_chi_residue, hom_cohomology, jacobi_frame, supertrace_class,
    truncation_oracle,
};
use crate::connection::{Grading, TAdicFrame};
use crate::convolution::{
    chern_convolution, composition_check, convolve, knorrer_phi, knorrer_psi_model, knorrer_round_trip, Kernel,
};
use crate::error::{Error, Result};
use crate::mf::{default_degree_bound, MF};
use crate::pmat::PMat;
use crate::poly::{Poly, Ring, RingRef, Q};
use crate::pushforward::{check_idempotent, e_via_perturbation};
use crate::residue::{residue_trace, residue_transform, ResidueQuery};
use crate::perturb::PerturbationType;
use crate::testkit::{random_conjugate, random_even_endomorphism, random_poly, random_retract};

/// Outcome of one suite: how many checks ran and which failed.
#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks > 0 && self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    /// Run a fallible check; an error counts as a failure.
    fn run(&mut self, what: &str, f: impl FnOnce() -> Result<bool>) {
        match f() {
            Ok(ok) => self.check(ok, || what.to_string()),
            Err(e) => self.check(false, || format!("{what}: {e}")),
        }
    }

}

fn p(s: &str, r: &RingRef) -> Poly {
    Poly::parse(s, r).expect("fixed polynomial")
}

fn koszul(r: &RingRef, pairs: &[(&str, &str)]) -> MF {
    let ps: Vec<(Poly, Poly)> = pairs.iter().map(|(a, b)| (p(a, r), p(b, r))).collect();
    MF::koszul(r, &ps).expect("fixed Koszul factorisation")
}

/// The Jacobian frames `t = ∂V` for `V ∈ {y², y³, y⁴, y₁²+y₂², y₁³+y₂³}`.
pub fn standard_frames() -> Result<Vec<(String, TAdicFrame)>> {
    let specs: [(&[&str], &str); 5] = [
        (&["y"], "y^2"),
        (&["y"], "y^3"),
        (&["y"], "y^4"),
        (&["y1", "y2"], "y1^2 + y2^2"),
        (&["y1", "y2"], "y1^3 + y2^3"),
    ];
    specs
        .iter()
        .map(|(vars, v)| {
            let r = Ring::new(vars)?;
            let v = Poly::parse(v, &r)?;
            let t: Vec<Poly> = (0..vars.len()).map(|i| v.partial(i)).collect();
            Ok((format!("V={v}"), TAdicFrame::new(&r, vars, &t, Grading::Auto)?))
        })
        .collect()
}

/// `H² = 0`, `Hσ = 0`, `πH = 0`, `δH + Hδ = 1 − σπ` on `y^a·dt_I`, `|a| ≤ deg`.
pub fn contraction_suite(deg: u32) -> Result<SuiteReport> {
    let mut rep = SuiteReport::default();
    for (name, f) in standard_frames()? {
        rep.run(&format!("contraction identities for {name}"), || Ok(f.check_contraction(deg)?.all_hold()));
    }
    Ok(rep)
}

/// Trace formula against the transformation law on random queries, plus
/// `Res[dt/t] = μ`, alternation in `r` and in `t`, and vanishing on `(t)`.
pub fn residue_suite<R: Rng>(rng: &mut R, queries: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::default();
    for (name, f) in standard_frames()? {
        let ring = f.ring().clone();
        let ys: Vec<usize> = f.yvars().to_vec();
        let n = f.n();
        // numerators reach just past the socle; r_i = c·y_i + (quadratic)
        let deg = f.quotient().socle_degree() + 1;
        rep.run(&format!("{name}: Res[dt/t] = μ"), || {
            let v = residue_trace(&ResidueQuery::dt(&f, Poly::one(&ring)))?;
            Ok(v.constant_term() == Q::from_integer(f.mu().into()) && v.is_constant())
        });
        let swapped = if n == 2 {
            let t: Vec<Poly> = f.tgens().iter().rev().cloned().collect();
            let names: Vec<&str> = ys.iter().map(|&i| ring.vars()[i].as_str()).collect();
            Some(TAdicFrame::new(&ring, &names, &t, Grading::Auto)?)
        } else {
            None
        };
        let mut nonzero = 0;
        for k in 0..queries {
            let s = random_poly(rng, &ring, &ys, deg, 4);
            let r: Vec<Poly> = (0..n)
                .map(|i| {
                    let lin = Poly::var(&ring, ys[i]).scale(&Q::from_integer(rng.gen_range(1..=3).into()));
                    &lin + &random_poly(rng, &ring, &ys, 2, 2)
                })
                .collect();
            let q = ResidueQuery::new(&f, s.clone(), r.clone())?;
            rep.run(&format!("{name}: query {k}: trace = transform"), || {
                let v = residue_trace(&q)?;
                nonzero += usize::from(!v.is_zero());
                Ok(v == residue_transform(&q)?)
            });
            let g = random_poly(rng, &ring, &ys, deg, 3);
            let tj = &f.tgens()[k % n];
            rep.run(&format!("{name}: query {k}: vanishes on (t)"), || {
                let v = ResidueQuery::new(&f, tj * &g, r.clone())?;
                Ok(residue_trace(&v)?.is_zero())
            });
            if let Some(sf) = &swapped {
                let base = residue_trace(&q)?;
                rep.run(&format!("{name}: query {k}: alternating in r"), || {
                    let rr: Vec<Poly> = r.iter().rev().cloned().collect();
                    Ok(residue_trace(&ResidueQuery::new(&f, s.clone(), rr)?)? == -&base)
                });
                rep.run(&format!("{name}: query {k}: alternating in t"), || {
                    let q2 = ResidueQuery::new(sf, s.clone(), r.clone())?;
                    Ok(residue_trace(&q2)? == -&base && residue_transform(&q2)? == -&base)
                });
            }
        }
        rep.check(queries == 0 || 4 * nonzero >= queries, || {
            format!("{name}: only {nonzero} of {queries} random residues are nonzero")
        });
    }
    Ok(rep)
}

/// Cardy / Hirzebruch–Riemann–Roch: for `W = x^d` (`d ≤ max_d`) and the
/// factorisations `(x^a | x^{d−a})`, the residue side against the
/// truncation oracle and the split model against the oracle's dimensions;
/// for `x²+y²`, `x³+y³`, `x³+y²` with Koszul-type factorisations, `χ` by
/// residues against the oracle.
pub fn cardy_suite(max_d: u32) -> Result<SuiteReport> {
    let mut rep = SuiteReport::default();
    let r = Ring::new(&["x"])?;
    for d in 2..=max_d {
        let ps: Vec<MF> = (1..d)
            .map(|a| MF::rank_one(&Poly::var(&r, 0).pow(a), &Poly::var(&r, 0).pow(d - a)))
            .collect::<Result<_>>()?;
        for (a, pa) in ps.iter().enumerate() {
            for (b, pb) in ps.iter().enumerate() {
                let what = format!("W=x^{d}, P_{}, P_{}", a + 1, b + 1);
                let oracle = match truncation_oracle(pa, pb) {
                    Ok(o) => o,
                    Err(e) => {
                        rep.check(false, || format!("{what}: oracle: {e}"));
                        continue;
                    }
                };
                rep.run(&format!("{what}: χ by residues = oracle"), || {
                    Ok(euler_chi_residue(pa, pb)? == Q::from_integer((oracle.0 as i64 - oracle.1 as i64).into()))
                });
                rep.run(&format!("{what}: split dims = oracle"), || Ok(hom_cohomology(pa, pb)? == oracle));
                rep.run(&format!("{what}: Cardy identity"), || {
                    let (l, rr) = cardy_check(pa, pb, &pa.identity(), &pb.identity())?;
                    Ok(l == rr)
                });
            }
        }
    }
    let r2 = Ring::new(&["x", "y"])?;
    let families: Vec<(&str, Vec<MF>)> = vec![
        ("x^2 + y^2", {
            let k = koszul(&r2, &[("x", "x"), ("y", "y")]);
            vec![k.shift(), koszul(&r2, &[("y", "y"), ("x", "x")]), k]
        }),
        (
            "x^3 + y^3",
            vec![
                koszul(&r2, &[("x", "x^2"), ("y", "y^2")]),
                koszul(&r2, &[("x^2", "x"), ("y", "y^2")]),
                koszul(&r2, &[("x + y", "x^2 - x*y + y^2")]),
            ],
        ),
        (
            "x^3 + y^2",
            vec![koszul(&r2, &[("x", "x^2"), ("y", "y")]), koszul(&r2, &[("x^2", "x"), ("y", "y")])],
        ),
    ];
    for (w, fs) in &families {
        for (i, a) in fs.iter().enumerate() {
            for (j, b) in fs.iter().enumerate() {
                rep.run(&format!("W={w}, X_{i}, X_{j}: χ by residues = oracle"), || {
                    let o = truncation_oracle(a, b)?;
                    Ok(euler_chi_residue(a, b)? == Q::from_integer((o.0 as i64 - o.1 as i64).into()))
                });
                rep.run(&format!("W={w}, X_{i}, X_{j}: Cardy identity"), || {
                    let (l, rr) = cardy_check(a, b, &a.identity(), &b.identity())?;
                    Ok(l == rr)
                });
            }
        }
    }
    Ok(rep)
}

/// Supertraces of homotopy products in `J_W` for `W ∈ {x³+y³, x²+y²}`:
/// independence of the homotopy choice, antisymmetry under reordering and
/// vanishing of non-full products, on random perturbed families
/// `λ_i = ∂_i d + (dρ_i − ρ_i d)` of randomly conjugated factorisations.
pub fn appendix_suite<R: Rng>(rng: &mut R, families: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::default();
    let r = Ring::new(&["x", "y"])?;
    let k3 = koszul(&r, &[("x", "x^2"), ("y", "y^2")]);
    let l3 = koszul(&r, &[("x + y", "x^2 - x*y + y^2")]);
    let bases = [
        ("x^3 + y^3", vec![l3.clone(), k3.direct_sum(&l3)?, k3]),
        ("x^2 + y^2", vec![koszul(&r, &[("x", "x"), ("y", "y")])]),
    ];
    let mut nonzero_full = 0;
    for (w, xs) in &bases {
        let frame = jacobi_frame(xs[0].potential())?;
        for k in 0..families {
            let x = random_conjugate(rng, &xs[k % xs.len()]);
            let rhos: Vec<PMat> = (0..2).map(|_| random_even_endomorphism(rng, &x, 2, 2)).collect();
            let what = format!("W={w}, family {k}");
            rep.run(&what, || {
                let l = alternative_homotopies(&x, &rhos)?;
                let (l1, l2) = (&l[0].m, &l[1].m);
                let (d1, d2) = (x.d().partial(0), x.d().partial(1));
                let reference = supertrace_class(&x, &frame, &[&d1, &d2])?;
                let full = supertrace_class(&x, &frame, &[l1, l2])?;
                let mixed = supertrace_class(&x, &frame, &[l1, &d2])?;
                let reordered = supertrace_class(&x, &frame, &[l2, l1])?;
                nonzero_full += usize::from(!reference.is_zero());
                let independent = full == reference && mixed == reference;
                let antisymmetric = reordered.rep == -&full.rep;
                let non_full = supertrace_class(&x, &frame, &[l1, l1])?.is_zero()
                    && supertrace_class(&x, &frame, &[l2, l2])?.is_zero()
                    && supertrace_class(&x, &frame, &[l1, &d1])?.is_zero();
                if !(independent && antisymmetric && non_full) {
                    return Err(Error::VerificationFailed(format!(
                        "independent {independent}, antisymmetric {antisymmetric}, non-full vanishing {non_full}"
                    )));
                }
                Ok(true)
            });
        }
    }
    rep.check(families == 0 || nonzero_full > 0, || "every full class vanished".into());
    Ok(rep)
}

/// `X = (x^a | x^{d−a})`, `1 ≤ a < d ≤ max_d`.
pub fn knorrer_cases(max_d: u32) -> Result<Vec<(String, MF)>> {
    let r = Ring::new(&["x"])?;
    let mut out = Vec::new();
    for d in 2..=max_d {
        for a in 1..d {
            let x = MF::rank_one(&Poly::var(&r, 0).pow(a), &Poly::var(&r, 0).pow(d - a))?;
            out.push((format!("X=(x^{a}|x^{})", d - a), x));
        }
    }
    Ok(out)
}

/// The Knörrer idempotent on `(X⊗K⊗K^∨)|_{u=v=0}`, its splitting and the
/// round trip back to `X`.
pub fn knorrer_suite(max_d: u32) -> Result<SuiteReport> {
    let mut rep = SuiteReport::default();
    for (name, x) in knorrer_cases(max_d)? {
        match knorrer_round_trip(&x, "u", "v") {
            Ok(k) => {
                rep.check(k.model.strict, || format!("{name}: e is not strict"));
                rep.check(k.e_matches, || format!("{name}: e ≠ 1_X ⊗ [[1,0,0,1],0,0,0]"));
                rep.check(k.splitting_maps, || format!("{name}: splitting maps"));
                rep.check(k.iso.is_some(), || format!("{name}: stripped splitting not isomorphic to X"));
            }
            Err(e) => rep.check(false, || format!("{name}: {e}")),
        }
    }
    Ok(rep)
}

/// Rank-(1,1) kernels `E: (y−x | y+x)` from `x²` to `y²` and
/// `F: (z−y | z+y)` from `y²` to `z²`.
pub fn quadratic_kernels() -> Result<(Kernel, Kernel)> {
    let re = Ring::new(&["x", "y"])?;
    let e = koszul(&re, &[("y - x", "y + x")]);
    let e = Kernel::new(&e, &["x"], &["y"], &p("x^2", &re), &p("y^2", &re))?;
    let rf = Ring::new(&["y", "z"])?;
    let f = koszul(&rf, &[("z - y", "z + y")]);
    let f = Kernel::new(&f, &["y"], &["z"], &p("y^2", &rf), &p("z^2", &rf))?;
    Ok((f, e))
}

/// The closed-form idempotent against the perturbation route, on the Knörrer
/// cases and the quadratic convolution.
pub fn closed_form_suite(max_d: u32) -> Result<SuiteReport> {
    let mut rep = SuiteReport::default();
    for (name, x) in knorrer_cases(max_d)? {
        rep.run(&format!("{name}: closed form = perturbation route"), || {
            let y = knorrer_phi(&x, "u", "v")?;
            let (yk, model) = knorrer_psi_model(&y, "u", "v")?;
            Ok(e_via_perturbation(&yk, &model.frame, &model.lambdas)?.m == model.e.m)
        });
    }
    let (f, e) = quadratic_kernels()?;
    rep.run("V=y^2 convolution: closed form = perturbation route", || {
        let c = convolve(&f, &e)?;
        Ok(e_via_perturbation(&c.tensor.mf, &c.model.frame, &c.model.lambdas)?.m == c.model.e.m)
    });
    Ok(rep)
}

/// The quadratic convolution: rank, strictness, `e² − e` witness, both Chern
/// routes, and the composition comparison on probes.
pub fn convolution_suite() -> Result<SuiteReport> {
    let mut rep = SuiteReport::default();
    let (f, e) = quadratic_kernels()?;
    let c = convolve(&f, &e)?;
    rep.check(
        c.model.reduced.rank() == f.mf.rank() * e.mf.rank() * c.model.frame.mu(),
        || "model rank ≠ rank F · rank E · μ".into(),
    );
    rep.check(c.model.strict, || "e is not strict".into());
    rep.run("e² − e null-homotopic within the default bound", || {
        let rec = check_idempotent(&c.model, default_degree_bound(&c.model.reduced))?;
        Ok(rec.strict && rec.witness.witness().is_some())
    });
    rep.run("ch(F⋆E): e-route = residue route", || {
        let (cor, er) = chern_convolution(&f, &e)?;
        Ok(cor == er)
    });
    rep.run("composition check", || {
        let rx = Ring::new(&["x"])?;
        let rz = Ring::new(&["z"])?;
        let xs = [koszul(&rx, &[("x", "x")])];
        let probes = [koszul(&rz, &[("z", "z")]), koszul(&rz, &[("z", "z")]).shift()];
        let mut ok = true;
        for x in &xs {
            ok &= composition_check(&f, &e, x, &probes, 8)?.all_agree();
        }
        Ok(ok)
    });
    Ok(rep)
}

/// The perturbation lemma on random finite retract data of both types.
pub fn perturbation_suite<R: Rng>(rng: &mut R, per_type: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::default();
    for kind in [PerturbationType::One, PerturbationType::Two] {
        for k in 0..per_type {
            let (d, mu) = random_retract(rng, kind);
            rep.run(&format!("{kind:?} datum {k}"), || {
                d.verify()?;
                let out = d.perturb(&mu, kind, 16)?;
                out.verify()?;
                Ok(kind == PerturbationType::Two || (out.p == d.p && out.b_l == d.b_l))
            });
        }
    }
    Ok(rep)
}

/// Every suite at self-test size.
pub fn selftest<R: Rng>(rng: &mut R) -> Result<Vec<(&'static str, SuiteReport)>> {
    Ok(vec![
        ("contraction", contraction_suite(3)?),
        ("residues", residue_suite(rng, 10)?),
        ("perturbation", perturbation_suite(rng, 10)?),
        ("knorrer", knorrer_suite(3)?),
        ("closed form", closed_form_suite(3)?),
        ("cardy", cardy_suite(3)?),
        ("appendix", appendix_suite(rng, 3)?),
        ("convolution", convolution_suite()?),
    ])
}
