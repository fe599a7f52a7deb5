//! Kernels, convolution of kernels (defect fusion) as finite models, Chern
//! characters of convolutions, and Knörrer periodicity.

use num_traits::{One, Zero};

use crate::chern::{
    binom2_sign, boundary_bulk, chern_of_pushforward_routes, endomorphism_of_hom, hom_model, jacobi_frame,
    JacobiElement,
};
use crate::connection::{Grading, TAdicFrame};
use crate::error::{Error, Result};
use crate::linalg::QMat;
use crate::mf::{supertrace, MFMap, TensorBasis, MF};
use crate::pmat::PMat;
use crate::poly::{Poly, Ring, RingRef, Q};
use crate::pushforward::{
    check_idempotent, constant_isomorphism, idempotent, image_dims_on_cohomology, split_constant_idempotent,
    strip_units, theta_map, FiniteModel,
};
use crate::residue::{residue_trace, ResidueQuery};

/// A factorisation of `W_out − W_in` over `k[inputs, outputs]`.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub mf: MF,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub w_in: Poly,
    pub w_out: Poly,
}

fn involves_only(p: &Poly, allowed: &[String]) -> bool {
    let ring = p.ring();
    (0..ring.nvars()).all(|i| !p.involves(i) || allowed.contains(&ring.vars()[i]))
}

impl Kernel {
    pub fn new(mf: &MF, inputs: &[&str], outputs: &[&str], w_in: &Poly, w_out: &Poly) -> Result<Kernel> {
        let ring = mf.ring();
        let inputs: Vec<String> = inputs.iter().map(|s| s.to_string()).collect();
        let outputs: Vec<String> = outputs.iter().map(|s| s.to_string()).collect();
        for v in inputs.iter().chain(&outputs) {
            if ring.var_index(v).is_none() {
                return Err(Error::UnknownVariable(v.clone()));
            }
        }
        if let Some(v) = inputs.iter().find(|v| outputs.contains(v)) {
            return Err(Error::VariableClash(format!("`{v}` is both an input and an output")));
        }
        if inputs.len() + outputs.len() != ring.nvars() {
            return Err(Error::InvalidRing("kernel variables must be split into inputs and outputs".into()));
        }
        let w_in = w_in.to_ring(ring)?;
        let w_out = w_out.to_ring(ring)?;
        if !involves_only(&w_in, &inputs) || !involves_only(&w_out, &outputs) {
            return Err(Error::InvalidRing("potentials must live on their own side".into()));
        }
        if *mf.potential() != &w_out - &w_in {
            return Err(Error::ContextMismatch(format!(
                "kernel potential {} is not {} − ({})",
                mf.potential(),
                w_out,
                w_in
            )));
        }
        Ok(Kernel { mf: mf.clone(), inputs, outputs, w_in, w_out })
    }

    /// A factorisation seen as a kernel from the point (`x` empty, `W = 0`).
    pub fn object(x: &MF) -> Kernel {
        let ring = x.ring();
        Kernel {
            mf: x.clone(),
            inputs: vec![],
            outputs: ring.vars().to_vec(),
            w_in: Poly::zero(ring),
            w_out: x.potential().clone(),
        }
    }
}

/// `F ⊗ E` over `k[x, y, z]` (variables in that order) together with the split.
#[derive(Clone, Debug)]
pub struct ExternalTensor {
    pub ring: RingRef,
    pub mf: MF,
    pub f: MF,
    pub e: MF,
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub z: Vec<String>,
}

/// The external tensor product `F ⊗_{k[y]} E` of `E: x → y` and `F: y → z`.
pub fn external_tensor(f: &Kernel, e: &Kernel) -> Result<ExternalTensor> {
    let (x, y, z) = (&e.inputs, &e.outputs, &f.outputs);
    if f.inputs.len() != y.len() || f.inputs.iter().any(|v| !y.contains(v)) {
        return Err(Error::VariableClash(format!(
            "middle variables differ: {:?} vs {:?}",
            f.inputs, y
        )));
    }
    for v in x {
        if z.contains(v) {
            return Err(Error::VariableClash(format!("`{v}` is both an outer input and output")));
        }
    }
    if e.w_out.to_string() != f.w_in.to_string() {
        return Err(Error::ContextMismatch(format!("middle potentials {} and {} differ", e.w_out, f.w_in)));
    }
    let names: Vec<&str> = x.iter().chain(y).chain(z).map(|s| s.as_str()).collect();
    let base = f.mf.ring();
    let ring = Ring::with_options(&names, base.order(), base.characteristic())?;
    let fr = f.mf.to_ring(&ring)?;
    let er = e.mf.to_ring(&ring)?;
    let mf = fr.tensor(&er)?;
    Ok(ExternalTensor { ring, mf, f: fr, e: er, x: x.clone(), y: y.clone(), z: z.clone() })
}

/// Which family of homotopies for `∂_{y_i}V` builds the idempotent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MiddleHomotopies {
    /// `λ_i = 1 ⊗ ∂_{y_i}(d_E)`.
    FromE,
    /// `λ_i = −∂_{y_i}(d_F) ⊗ 1`.
    FromF,
}

/// A convolution `F ⋆ E`: the finite model over `k[x, z]` and its sources.
#[derive(Clone, Debug)]
pub struct Convolution {
    pub tensor: ExternalTensor,
    pub model: FiniteModel,
}

/// `F ⋆ E` with `λ_i = 1 ⊗ ∂_{y_i}(d_E)`.
pub fn convolve(f: &Kernel, e: &Kernel) -> Result<Convolution> {
    convolve_with(f, e, MiddleHomotopies::FromE)
}

pub fn convolve_with(f: &Kernel, e: &Kernel, which: MiddleHomotopies) -> Result<Convolution> {
    let t = external_tensor(f, e)?;
    let ring = &t.ring;
    let v = e.w_out.to_ring(ring)?;
    let yidx: Vec<usize> = t.y.iter().map(|n| ring.var_index(n).expect("middle variable")).collect();
    let tgens: Vec<Poly> = yidx.iter().map(|&i| v.partial(i)).collect();
    let ynames: Vec<&str> = t.y.iter().map(|s| s.as_str()).collect();
    let frame = TAdicFrame::new(ring, &ynames, &tgens, Grading::Auto)?;
    let lambdas = yidx
        .iter()
        .map(|&i| match which {
            MiddleHomotopies::FromE => {
                let de = MFMap::new_unchecked(&t.e, &t.e, true, t.e.d().partial(i));
                t.f.identity().tensor(&de)
            }
            MiddleHomotopies::FromF => {
                let df = MFMap::new_unchecked(&t.f, &t.f, true, t.f.d().partial(i).neg());
                df.tensor(&t.e.identity())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let model = idempotent(&t.mf, &frame, &lambdas)?;
    Ok(Convolution { tensor: t, model })
}

/// `Φ_F(X) = F ⋆ X` for a factorisation `X` of the input potential of `F`.
pub fn apply_kernel(f: &Kernel, x: &MF) -> Result<Convolution> {
    convolve(f, &Kernel::object(x))
}

/// The convolution model regarded as a kernel `x → z` (the idempotent is kept separately).
pub fn model_kernel(c: &Convolution, f: &Kernel, e: &Kernel) -> Result<Kernel> {
    let m = &c.model.reduced;
    let ring = m.ring();
    let ins: Vec<&str> = c.tensor.x.iter().map(|s| s.as_str()).collect();
    let outs: Vec<&str> = c.tensor.z.iter().map(|s| s.as_str()).collect();
    let w_in = e.w_in.to_ring(&c.tensor.ring)?.to_ring(ring)?;
    let w_out = f.w_out.to_ring(&c.tensor.ring)?.to_ring(ring)?;
    Kernel::new(m, &ins, &outs, &w_in, &w_out)
}

/// `ch(F ⋆ E)` by the residue formula `(−1)^{C(m,2)} Res_y[ch(F)·ch(E)·dy / ∂V]`
/// in `J_{U−W}`, and by the `e`-route on the convolution model.
pub fn chern_convolution(f: &Kernel, e: &Kernel) -> Result<(JacobiElement, JacobiElement)> {
    let c = convolve(f, e)?;
    let t = &c.tensor;
    let ring = &t.ring;
    let idx = |names: &[String]| -> Vec<usize> { names.iter().map(|n| ring.var_index(n).expect("var")).collect() };
    let (xi, yi, zi) = (idx(&t.x), idx(&t.y), idx(&t.z));
    let (n, m, p) = (xi.len(), yi.len(), zi.len());
    let prod = |x: &MF, vars: &[usize]| {
        let mut a = PMat::identity(ring, x.rank());
        for &v in vars {
            a = a.mul(&x.d().partial(v));
        }
        supertrace(&a, x.r0())
    };
    let xy: Vec<usize> = xi.iter().chain(&yi).copied().collect();
    let yz: Vec<usize> = yi.iter().chain(&zi).copied().collect();
    let ch_e = prod(&t.e, &xy).scale(&binom2_sign(n + m));
    let ch_f = prod(&t.f, &yz).scale(&binom2_sign(m + p));
    let res = residue_trace(&ResidueQuery::dy(&c.model.frame, &ch_f * &ch_e)?)?;
    let base = c.model.frame.base_ring();
    let w = c.model.reduced.potential().to_ring(base)?;
    let bframe = jacobi_frame(&w)?;
    let corollary = JacobiElement { rep: bframe.normal_form(&res.scale(&binom2_sign(m)))? };
    let (e_route, r_route) = chern_of_pushforward_routes(&t.mf, &c.model, None)?;
    if e_route != r_route {
        return Err(Error::VerificationFailed(format!(
            "pushforward Chern routes disagree: {e_route} vs {r_route}"
        )));
    }
    Ok((corollary, e_route))
}

/// An object presented as the image of an endomorphism `f` of a factorisation.
#[derive(Clone, Debug)]
pub struct ImageObject {
    pub mf: MF,
    pub f: MFMap,
}

fn image_of_model(c: &Convolution, inner: Option<&MFMap>) -> Result<ImageObject> {
    let model = &c.model;
    let mut f = model.e.clone();
    if let Some(g) = inner {
        let g = c.model.frame.descend(&g.m)?;
        let g = MFMap::new_unchecked(&model.reduced, &model.reduced, false, g);
        f = model.e.compose(&g)?.compose(&model.e)?;
    }
    Ok(ImageObject { mf: model.reduced.clone(), f })
}

/// `Φ_F(Φ_E(X))` as an image object over `k[z]`.
pub fn iterated_image(f: &Kernel, e: &Kernel, x: &MF) -> Result<ImageObject> {
    let c1 = apply_kernel(e, x)?;
    let m1 = c1.model.reduced.clone();
    let c2 = apply_kernel(f, &m1)?;
    let t = &c2.tensor;
    let e1 = MFMap::new_unchecked(&t.e, &t.e, false, c1.model.e.m.to_ring(&t.ring)?);
    let g = t.f.identity().tensor(&e1)?;
    image_of_model(&c2, Some(&g))
}

/// `Φ_{F⋆E}(X)` as an image object over `k[z]`.
pub fn fused_image(f: &Kernel, e: &Kernel, x: &MF) -> Result<ImageObject> {
    let c = convolve(f, e)?;
    let k = model_kernel(&c, f, e)?;
    let c3 = apply_kernel(&k, x)?;
    let t = &c3.tensor;
    let ek = MFMap::new_unchecked(&t.f, &t.f, false, c.model.e.m.to_ring(&t.ring)?);
    let g = ek.tensor(&t.e.identity())?;
    image_of_model(&c3, Some(&g))
}

/// `(dim H⁰, dim H¹)` of `Hom(P, Im f)`.
pub fn image_hom_dims(obj: &ImageObject, probe: &MF) -> Result<(usize, usize)> {
    let m = &obj.mf;
    let p = probe.to_ring(m.ring())?;
    let (_, model) = hom_model(&p, m)?;
    let act = endomorphism_of_hom(&p, m, |phi| obj.f.m.mul(phi));
    let act = model
        .frame
        .descend(&act)?
        .to_qmat()
        .ok_or_else(|| Error::BaseNotField("non-constant action".into()))?;
    image_dims_on_cohomology(&model, &act)
}

/// Per-invariant comparison of `Φ_F(Φ_E(X))` with `Φ_{F⋆E}(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionReport {
    /// `β(f)` on both sides, as printed normal forms in `J_U`.
    pub chern: (String, String),
    /// `Hom(P, −)` cohomology dimensions per probe, both sides.
    pub probes: Vec<((usize, usize), (usize, usize))>,
    /// Whether the convolution idempotent passed its `e² − e` witness search.
    pub kernel_idempotent: bool,
}

impl CompositionReport {
    pub fn all_agree(&self) -> bool {
        self.chern.0 == self.chern.1 && self.probes.iter().all(|(a, b)| a == b) && self.kernel_idempotent
    }
}

pub fn composition_check(f: &Kernel, e: &Kernel, x: &MF, probes: &[MF], degree_bound: u32) -> Result<CompositionReport> {
    let lhs = iterated_image(f, e, x)?;
    let rhs = fused_image(f, e, x)?;
    let chern = (
        boundary_bulk(&lhs.mf, &lhs.f)?.to_string(),
        boundary_bulk(&rhs.mf, &rhs.f)?.to_string(),
    );
    let probes = probes
        .iter()
        .map(|p| Ok((image_hom_dims(&lhs, p)?, image_hom_dims(&rhs, p)?)))
        .collect::<Result<Vec<_>>>()?;
    let c = convolve(f, e)?;
    let rec = check_idempotent(&c.model, degree_bound)?;
    Ok(CompositionReport {
        chern,
        probes,
        kernel_idempotent: rec.strict && rec.witness.witness().is_some(),
    })
}

// ------------------------------------------------------------------ Knörrer

/// `K = (k[u,v] ⇄ k[u,v])` with `d = [[0, u], [v, 0]]`, a factorisation of `uv`.
pub fn knorrer_k(ring: &RingRef, u: &str, v: &str) -> Result<MF> {
    let pu = Poly::var_named(ring, u)?;
    let pv = Poly::var_named(ring, v)?;
    MF::koszul(ring, &[(pv, pu)])
}

/// `Φ(X) = X ⊗ K` over `k[x, u, v]`, a factorisation of `W + uv`.
pub fn knorrer_phi(x: &MF, u: &str, v: &str) -> Result<MF> {
    let ring = x.ring();
    for name in [u, v] {
        if ring.var_index(name).is_some() {
            return Err(Error::VariableClash(format!("`{name}` is already a variable")));
        }
    }
    if u == v {
        return Err(Error::VariableClash(format!("`{u}` used twice")));
    }
    let mut names: Vec<&str> = ring.vars().iter().map(|s| s.as_str()).collect();
    names.extend([u, v]);
    let big = Ring::with_options(&names, ring.order(), ring.characteristic())?;
    let xb = x.to_ring(&big)?;
    xb.tensor(&knorrer_k(&big, u, v)?)
}

/// The model of `Ψ(Y)`: `Y ⊗ K^∨` pushed forward along `t = (u, v)` with
/// `λ₁ = −1 ⊗ ∂_v(d_{K^∨})`, `λ₂ = −1 ⊗ ∂_u(d_{K^∨})`.
pub fn knorrer_psi_model(y: &MF, u: &str, v: &str) -> Result<(MF, FiniteModel)> {
    let ring = y.ring();
    let iu = ring.var_index(u).ok_or_else(|| Error::UnknownVariable(u.into()))?;
    let iv = ring.var_index(v).ok_or_else(|| Error::UnknownVariable(v.into()))?;
    let kd = knorrer_k(ring, u, v)?.dual();
    let yk = y.tensor(&kd)?;
    let frame = TAdicFrame::new(ring, &[u, v], &[Poly::var(ring, iu), Poly::var(ring, iv)], Grading::Auto)?;
    let l = |i: usize| -> Result<MFMap> {
        let m = MFMap::new_unchecked(&kd, &kd, true, kd.d().partial(i).neg());
        y.identity().tensor(&m)
    };
    let lambdas = vec![l(iv)?, l(iu)?];
    let model = idempotent(&yk, &frame, &lambdas)?;
    Ok((yk, model))
}

/// Sign relating `x ⊗ k_a ⊗ k_b^*` to the basis transported from `X ⊗ K^∨ ⊗ K`
/// (the symmetry of the tensor product contributes `(−1)^{|a||b|}`).
fn transported_sign(a: usize, b: usize) -> Q {
    if a == 1 && b == 1 {
        -Q::one()
    } else {
        Q::one()
    }
}

/// `1_X ⊗ M` on `X ⊗ K ⊗ K^∨` for a 4×4 matrix `M` written in the basis
/// `k₀k₀^*, k₀k₁^*, k₁k₀^*, k₁k₁^*` transported from `X ⊗ K^∨ ⊗ K`;
/// the result is in the plain tensor basis.
pub fn knorrer_block(x: &MF, m: &QMat) -> QMat {
    let kp = [false, true];
    let b1 = TensorBasis::new(&x.parities(), &kp);
    let pxk: Vec<bool> = b1.pairs.iter().map(|&(i, a)| x.odd(i) ^ kp[a]).collect();
    let b2 = TensorBasis::new(&pxk, &kp);
    let size = 4 * x.rank();
    let mut out = QMat::zeros(size, size);
    for i in 0..x.rank() {
        for a2 in 0..2 {
            for b2_ in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        let v = m.get(2 * a2 + b2_, 2 * a + b);
                        if v.is_zero() {
                            continue;
                        }
                        let r = b2.pos(b1.pos(i, a2), b2_);
                        let c = b2.pos(b1.pos(i, a), b);
                        out.set(r, c, v * transported_sign(a2, b2_) * transported_sign(a, b));
                    }
                }
            }
        }
    }
    out
}

/// The matrix `1_X ⊗ row` of a map `X ⊗ K ⊗ K^∨ → X` given on the four
/// transported basis tensors.
fn knorrer_to_x(x: &MF, row: &[Q; 4]) -> QMat {
    let kp = [false, true];
    let b1 = TensorBasis::new(&x.parities(), &kp);
    let pxk: Vec<bool> = b1.pairs.iter().map(|&(i, a)| x.odd(i) ^ kp[a]).collect();
    let b2 = TensorBasis::new(&pxk, &kp);
    let mut out = QMat::zeros(x.rank(), 4 * x.rank());
    for i in 0..x.rank() {
        for a in 0..2 {
            for b in 0..2 {
                out.set(i, b2.pos(b1.pos(i, a), b), &row[2 * a + b] * transported_sign(a, b));
            }
        }
    }
    out
}

/// The expected Knörrer idempotent `1_X ⊗ [[1,0,0,1],0,0,0]`.
pub fn knorrer_expected_idempotent(x: &MF) -> QMat {
    let mut m = QMat::zeros(4, 4);
    m.set(0, 0, Q::one());
    m.set(0, 3, Q::one());
    knorrer_block(x, &m)
}

/// Results of the Knörrer round trip `Ψ(Φ(X))`.
#[derive(Clone, Debug)]
pub struct KnorrerReport {
    pub model: FiniteModel,
    /// `e` equals `1_X ⊗ [[1,0,0,1],0,0,0]` in the transported basis.
    pub e_matches: bool,
    /// `f = 1⊗(1 0 0 1)`, `g = 1⊗(1 0 0 0)ᵗ` (transported basis) satisfy `g f = e`, `f g = 1`.
    pub splitting_maps: bool,
    /// The split summand after removing contractible rank-(1,1) pieces.
    pub stripped: MF,
    /// A constant isomorphism `P` with `P d_X = d_{stripped} P`, if found.
    pub iso: Option<QMat>,
}

pub fn knorrer_round_trip(x: &MF, u: &str, v: &str) -> Result<KnorrerReport> {
    let y = knorrer_phi(x, u, v)?;
    let (_, model) = knorrer_psi_model(&y, u, v)?;
    let e = model
        .e
        .m
        .to_qmat()
        .ok_or_else(|| Error::NotConstant("Knörrer idempotent".into()))?;
    let e_matches = e == knorrer_expected_idempotent(x);
    let one = Q::one();
    let zero = Q::zero();
    let fm = knorrer_to_x(x, &[one.clone(), zero.clone(), zero.clone(), one.clone()]);
    let gm = knorrer_to_x(x, &[one, zero.clone(), zero.clone(), zero]).transpose();
    let splitting_maps = gm.mul(&fm) == e && fm.mul(&gm) == QMat::identity(x.rank());
    let (split, _, _) = split_constant_idempotent(&model)?;
    let stripped = strip_units(&split)?.reduced;
    let xb = x.to_ring(stripped.ring())?;
    let iso = constant_isomorphism(&xb, &stripped)?;
    Ok(KnorrerReport { model, e_matches, splitting_maps, stripped, iso })
}

/// The comparison map `κ: X ⊗ K ⊗ K^∨ |_{u=v=0} → X`.
#[derive(Clone, Debug)]
pub struct KappaReport {
    /// `Res[str(α·∂_u(d_K)·∂_v(d_K))·du∧dv / u,v]` on the four transported basis
    /// tensors, `α` the corresponding element of `Hom(K, K)`.
    pub kappa_row: [Q; 4],
    /// The same residue with the factors in the order `∂_v(d_K)·∂_u(d_K)`.
    pub reversed_row: [Q; 4],
    /// `f∘ϑ` on the four basis tensors.
    pub f_theta_row: [Q; 4],
    /// `κ` commutes with the differentials.
    pub strict: bool,
    /// `κ(x ⊗ 1_K) = c·x`.
    pub unit_value: Q,
    /// `κ∘g = 1_X`.
    pub realizes_split: bool,
}

pub fn knorrer_kappa_check(x: &MF, u: &str, v: &str) -> Result<KappaReport> {
    let y = knorrer_phi(x, u, v)?;
    let (yk, model) = knorrer_psi_model(&y, u, v)?;
    // residues over k[u, v]
    let ring = y.ring();
    let kr = Ring::with_options(&[u, v], ring.order(), ring.characteristic())?;
    let k = knorrer_k(&kr, u, v)?;
    let (du, dv) = (k.d().partial(0), k.d().partial(1));
    let frame = TAdicFrame::new(&kr, &[u, v], &[Poly::var(&kr, 0), Poly::var(&kr, 1)], Grading::Auto)?;
    let residue_row = |m: &PMat| -> Result<[Q; 4]> {
        let mut row: [Q; 4] = Default::default();
        for a in 0..2 {
            for b in 0..2 {
                let mut ea = PMat::zeros(&kr, 2, 2);
                ea.set(a, b, Poly::one(&kr));
                let s = supertrace(&ea.mul(m), k.r0());
                let c = residue_trace(&ResidueQuery::dt(&frame, s))?.constant_term();
                row[2 * a + b] = c * transported_sign(a, b);
            }
        }
        Ok(row)
    };
    let kappa_row = residue_row(&du.mul(&dv))?;
    let reversed_row = residue_row(&dv.mul(&du))?;

    let theta = theta_map(&yk, &model.frame, &model.lambdas)?
        .m
        .to_qmat()
        .ok_or_else(|| Error::NotConstant("ϑ".into()))?;
    let one = Q::one();
    let zero = Q::zero();
    let fm = knorrer_to_x(x, &[one.clone(), zero.clone(), zero.clone(), one.clone()]);
    let ft = fm.mul(&theta);
    let mut f_theta_row: [Q; 4] = Default::default();
    if x.rank() > 0 {
        let kp = [false, true];
        let b1 = TensorBasis::new(&x.parities(), &kp);
        let pxk: Vec<bool> = b1.pairs.iter().map(|&(i, a)| x.odd(i) ^ kp[a]).collect();
        let b2 = TensorBasis::new(&pxk, &kp);
        for a in 0..2 {
            for b in 0..2 {
                f_theta_row[2 * a + b] = ft.get(0, b2.pos(b1.pos(0, a), b)) * transported_sign(a, b);
            }
        }
    }

    let kappa = knorrer_to_x(x, &kappa_row);
    let base = model.frame.base_ring();
    let kp = PMat::from_qmat(base, &kappa);
    let xb = x.to_ring(base)?;
    let strict = kp.mul(model.reduced.d()) == xb.d().mul(&kp);
    let gm = knorrer_to_x(x, &[one, zero.clone(), zero.clone(), zero]).transpose();
    let realizes_split = kappa.mul(&gm) == QMat::identity(x.rank());
    // 1_K = E₀₀ + E₁₁ is k₀k₀^* + k₁k₁^* in the plain basis
    let unit_value = &kappa_row[0] - &kappa_row[3];
    Ok(KappaReport { kappa_row, reversed_row, f_theta_row, strict, unit_value, realizes_split })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::chern_character;
    use crate::poly::parse_polynomial;

    fn p(s: &str, r: &RingRef) -> Poly {
        parse_polynomial(s, r).unwrap()
    }

    #[test]
    fn knorrer_cubic() {
        let r = Ring::new(&["x"]).unwrap();
        let x = MF::koszul(&r, &[(p("x", &r), p("x^2", &r))]).unwrap();
        let rep = knorrer_round_trip(&x, "u", "v").unwrap();
        assert!(rep.model.strict);
        assert!(rep.e_matches);
        assert!(rep.splitting_maps);
        assert!(rep.iso.is_some());
        let k = knorrer_kappa_check(&x, "u", "v").unwrap();
        assert!(k.strict && k.realizes_split);
        assert_eq!(k.unit_value, Q::one());
        let neg: Vec<Q> = k.f_theta_row.iter().map(|c| -c).collect();
        assert_eq!(k.kappa_row.to_vec(), neg);
        assert_eq!(&k.reversed_row[0] - &k.reversed_row[3], -Q::one());
        assert!(matches!(knorrer_phi(&x, "x", "v"), Err(Error::VariableClash(_))));
    }

    #[test]
    fn knorrer_chern_two_variables() {
        let r = Ring::new(&["x", "y"]).unwrap();
        let x = MF::koszul(&r, &[(p("x", &r), p("x^2", &r)), (p("y", &r), p("y^2", &r))]).unwrap();
        let y = knorrer_phi(&x, "u", "v").unwrap();
        let (yk, model) = knorrer_psi_model(&y, "u", "v").unwrap();
        let (a, b) = chern_of_pushforward_routes(&yk, &model, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), chern_character(&x).unwrap().to_string());
    }

    fn kernels() -> (Kernel, Kernel) {
        let re = Ring::new(&["x", "y"]).unwrap();
        let e = MF::koszul(&re, &[(p("y-x", &re), p("y+x", &re))]).unwrap();
        let e = Kernel::new(&e, &["x"], &["y"], &p("x^2", &re), &p("y^2", &re)).unwrap();
        let rf = Ring::new(&["y", "z"]).unwrap();
        let f = MF::koszul(&rf, &[(p("z-y", &rf), p("z+y", &rf))]).unwrap();
        let f = Kernel::new(&f, &["y"], &["z"], &p("y^2", &rf), &p("z^2", &rf)).unwrap();
        (f, e)
    }

    #[test]
    fn quadratic_convolution() {
        let (f, e) = kernels();
        let c = convolve(&f, &e).unwrap();
        assert_eq!(c.model.reduced.rank(), f.mf.rank() * e.mf.rank() * c.model.frame.mu());
        assert!(c.model.strict);
        let (cor, er) = chern_convolution(&f, &e).unwrap();
        assert_eq!(cor, er);
        let alt = convolve_with(&f, &e, MiddleHomotopies::FromF).unwrap();
        assert!(alt.model.strict);

        let rx = Ring::new(&["x"]).unwrap();
        let x = MF::koszul(&rx, &[(p("x", &rx), p("x", &rx))]).unwrap();
        let rz = Ring::new(&["z"]).unwrap();
        let probe = MF::koszul(&rz, &[(p("z", &rz), p("z", &rz))]).unwrap();
        let rep = composition_check(&f, &e, &x, &[probe], 8).unwrap();
        assert!(rep.all_agree(), "{rep:?}");
    }

    #[test]
    fn closed_form_matches_perturbation() {
        use crate::pushforward::e_via_perturbation;
        let r = Ring::new(&["x"]).unwrap();
        for (a, b) in [("x", "x^2"), ("x^2", "x^3")] {
            let x = MF::koszul(&r, &[(p(a, &r), p(b, &r))]).unwrap();
            let y = knorrer_phi(&x, "u", "v").unwrap();
            let (yk, model) = knorrer_psi_model(&y, "u", "v").unwrap();
            let pe = e_via_perturbation(&yk, &model.frame, &model.lambdas).unwrap();
            assert_eq!(pe.m, model.e.m);
        }
        let (f, e) = kernels();
        let c = convolve(&f, &e).unwrap();
        let pe = e_via_perturbation(&c.tensor.mf, &c.model.frame, &c.model.lambdas).unwrap();
        assert_eq!(pe.m, c.model.e.m);
    }
}
