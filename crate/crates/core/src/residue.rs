//! Grothendieck residue symbols `Res[s·dr₁⋯drₙ / t₁,…,tₙ]` by two independent
//! algorithms: traces of connection commutators and the transformation law.

use num_traits::{One, Zero};

use crate::connection::TAdicFrame;
use crate::error::{Error, Result};
use crate::linalg::QMat;
use crate::mf::{MFMap, MF};
use crate::pmat::PMat;
use crate::poly::{Mono, Poly, Q};
use crate::pushforward::permutations;

/// The symbol `Res[s·dr₁⋯drₙ / t]` with denominators taken from the frame.
#[derive(Clone, Debug)]
pub struct ResidueQuery<'a> {
    pub frame: &'a TAdicFrame,
    pub s: Poly,
    pub r: Vec<Poly>,
}

impl<'a> ResidueQuery<'a> {
    pub fn new(frame: &'a TAdicFrame, s: Poly, r: Vec<Poly>) -> Result<Self> {
        if r.len() != frame.n() {
            return Err(Error::ShapeMismatch(format!(
                "{} differentials for {} denominators",
                r.len(),
                frame.n()
            )));
        }
        for p in r.iter().chain(std::iter::once(&s)) {
            if !crate::poly::same_ring(p.ring(), frame.ring()) {
                return Err(Error::ContextMismatch("residue query and frame".into()));
            }
        }
        Ok(ResidueQuery { frame, s, r })
    }

    /// `Res[s·dt₁⋯dtₙ / t]`.
    pub fn dt(frame: &'a TAdicFrame, s: Poly) -> Self {
        ResidueQuery {
            frame,
            s,
            r: frame.tgens().to_vec(),
        }
    }

    /// `Res[g·dy₁⋯dyₙ / t]` in the integrated variables.
    pub fn dy(frame: &'a TAdicFrame, g: Poly) -> Result<Self> {
        let ring = frame.ring();
        let r = frame.yvars().iter().map(|&i| Poly::var(ring, i)).collect();
        ResidueQuery::new(frame, g, r)
    }
}

/// `Σ_τ sgn(τ) tr(s·[∂/∂t_{τ1}, r₁]⋯[∂/∂t_{τn}, rₙ])` over the base ring.
pub fn residue_trace(q: &ResidueQuery) -> Result<Poly> {
    let frame = q.frame;
    let n = frame.n();
    let base = frame.base_ring();
    let s = frame.mult_operator(&q.s)?;
    if s.is_zero() {
        return Ok(Poly::zero(base));
    }
    let mut ops: Vec<Vec<PMat>> = Vec::with_capacity(n);
    for r in &q.r {
        ops.push((0..n).map(|j| frame.commutator_operator(j, r)).collect::<Result<_>>()?);
    }
    let mut total = Poly::zero(base);
    for (perm, sgn) in permutations(n) {
        let mut m = s.clone();
        for (i, &j) in perm.iter().enumerate() {
            m = m.mul(&ops[i][j]);
            if m.is_zero() {
                break;
            }
        }
        let tr = m.trace();
        total = if sgn > 0 { &total + &tr } else { &total - &tr };
    }
    Ok(total)
}

/// Coefficient of `Π y_i^{N_i − 1}` in `h` (a polynomial in the `y` variables only).
pub fn residue_monomial(h: &Poly, n: &[u32]) -> Q {
    assert_eq!(h.ring().nvars(), n.len(), "one exponent per variable");
    if n.contains(&0) {
        return Q::zero();
    }
    let m: Mono = n.iter().map(|&e| e - 1).collect();
    h.coeff(&m)
}

/// Base-ring coefficient of `Π y_i^{N_i − 1}` in a polynomial of the full ring.
pub fn residue_monomial_in(frame: &TAdicFrame, h: &Poly, n: &[u32]) -> Poly {
    let mut out = Poly::zero(frame.base_ring());
    if n.contains(&0) {
        return out;
    }
    for (m, c) in h.raw_terms() {
        if frame.yvars().iter().zip(n).all(|(&i, &e)| m[i] == e - 1) {
            let bm: Mono = frame.base_vars().iter().map(|&i| m[i]).collect();
            out.add_term(bm, c.clone());
        }
    }
    out
}

/// The transformation law: with `y_i^{N_i} = Σ_j A_ij t_j`,
/// `Res[g·dy / t] = Res[g·det(A)·dy / y^N]`.
pub fn residue_transform_dy(frame: &TAdicFrame, g: &Poly) -> Result<Poly> {
    let n = frame.n();
    let ring = frame.ring();
    let cap = frame.mu() as u32 + 1;
    let mut exps = Vec::with_capacity(n);
    let mut a = PMat::zeros(ring, n, n);
    for (row, &i) in frame.yvars().iter().enumerate() {
        let y = Poly::var(ring, i);
        let mut k = 1;
        let mut p = y.clone();
        while !frame.normal_form(&p)?.is_zero() {
            k += 1;
            if k > cap {
                return Err(Error::NotZeroDimensional(format!(
                    "{} is not nilpotent modulo t within exponent {cap}",
                    ring.vars()[i]
                )));
            }
            p = &p * &y;
        }
        for (j, c) in frame.lift(&p)?.into_iter().enumerate() {
            a.set(row, j, c);
        }
        exps.push(k);
    }
    Ok(residue_monomial_in(frame, &(g * &a.det()), &exps))
}

/// `Res[s·dr / t]` by the transformation law after the Jacobian reduction
/// `dr₁⋯drₙ = det(∂r_i/∂y_j)·dy₁⋯dyₙ`.
pub fn residue_transform(q: &ResidueQuery) -> Result<Poly> {
    let frame = q.frame;
    let ring = frame.ring();
    let n = frame.n();
    let mut jac = PMat::zeros(ring, n, n);
    for (i, r) in q.r.iter().enumerate() {
        for (j, &y) in frame.yvars().iter().enumerate() {
            jac.set(i, j, r.partial(y));
        }
    }
    residue_transform_dy(frame, &(&q.s * &jac.det()))
}

/// Gram matrix `⟨e_a, e_b⟩ = Res[e_a·e_b·dy / t]` of the residue pairing on `R/tR`
/// (over a field base).
pub fn residue_gram(frame: &TAdicFrame) -> Result<QMat> {
    if frame.base_ring().nvars() != 0 {
        return Err(Error::BaseNotField(format!("base ring has variables {:?}", frame.base_ring().vars())));
    }
    let mu = frame.mu();
    let mut g = QMat::zeros(mu, mu);
    for a in 0..mu {
        for b in a..mu {
            let s = &frame.section(a) * &frame.section(b);
            let v = residue_trace(&ResidueQuery::dy(frame, s)?)?.constant_term();
            g.set(a, b, v.clone());
            g.set(b, a, v);
        }
    }
    Ok(g)
}

/// Both sides of `str(α̂ ∘ Atⁿ) = (−1)ⁿ Res[str(α·d(d_X)^{∧n}) / t]` for a
/// degree-`n` endomorphism `α` of `X` whose reduction mod `t` is a morphism.
pub fn atiyah_trace(x: &MF, frame: &TAdicFrame, alpha: &MFMap) -> Result<(Poly, Poly)> {
    let n = frame.n();
    let base = frame.base_ring();
    if alpha.odd != (n % 2 == 1) || alpha.m.rows() != x.rank() || alpha.m.cols() != x.rank() {
        return Err(Error::NotAMorphism(format!("α must be an endomorphism of parity {}", n % 2)));
    }
    let reduced = crate::pushforward::reduce_mod_t(x, frame)?;
    let a = frame.descend(&alpha.m)?;
    let ahat = MFMap::new_unchecked(&reduced, &reduced, alpha.odd, a.clone());
    if !ahat.is_morphism() {
        return Err(Error::NotAMorphism("α does not descend to a morphism of X/tX".into()));
    }
    let sign_n = if n.is_multiple_of(2) { Q::one() } else { -Q::one() };

    // lhs: supertrace of α̂ composed with the descended Atiyah power
    let comms: Vec<PMat> = (0..n)
        .map(|k| frame.descend_commutator(k, x.d()))
        .collect::<Result<_>>()?;
    let size = reduced.rank();
    let mut at = PMat::zeros(base, size, size);
    for (perm, sgn) in permutations(n) {
        let mut term = PMat::identity(base, size);
        for &k in &perm {
            term = term.mul(&comms[k]);
        }
        at = if sgn > 0 { at.add(&term) } else { at.sub(&term) };
    }
    let lhs = crate::mf::supertrace(&a.mul(&at), reduced.r0()).scale(&sign_n);

    // rhs: entrywise expansion of str(α·dd∧⋯∧dd) into residue symbols
    let rank = x.rank();
    let d = x.d();
    let mut rhs = Poly::zero(base);
    for i in 0..rank {
        for j0 in 0..rank {
            let s = alpha.m.get(i, j0);
            if s.is_zero() {
                continue;
            }
            let mut path = vec![j0];
            walk(d, i, n, &mut path, &mut |path| {
                let mut r = Vec::with_capacity(n);
                for k in 0..n {
                    let next = if k + 1 < n { path[k + 1] } else { i };
                    r.push(d.get(path[k], next).clone());
                }
                let v = residue_trace(&ResidueQuery::new(frame, s.clone(), r)?)?;
                rhs = if x.odd(i) { &rhs - &v } else { &rhs + &v };
                Ok(())
            })?;
        }
    }
    Ok((lhs, rhs.scale(&sign_n)))
}

/// Enumerate index paths `j0 → j1 → ⋯ → j_{n−1} → end` through non-zero entries of `d`.
fn walk(
    d: &PMat,
    end: usize,
    n: usize,
    path: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    let last = *path.last().expect("non-empty path");
    if path.len() == n {
        return if n == 0 || !d.get(last, end).is_zero() { f(path) } else { Ok(()) };
    }
    for next in 0..d.cols() {
        if d.get(last, next).is_zero() {
            continue;
        }
        path.push(next);
        walk(d, end, n, path, f)?;
        path.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::Grading;
    use crate::poly::{qf, MonomialOrder, Ring, RingRef};

    fn p(s: &str, r: &RingRef) -> Poly {
        Poly::parse(s, r).unwrap()
    }

    #[test]
    fn one_variable_symbols() {
        let r = Ring::new(&["x"]).unwrap();
        let f = TAdicFrame::new(&r, &["x"], &[p("x", &r)], Grading::Auto).unwrap();
        let q = ResidueQuery::dt(&f, p("1", &r));
        assert_eq!(residue_trace(&q).unwrap().constant_term(), q_one());
        assert_eq!(residue_transform(&q).unwrap().constant_term(), q_one());
        let q = ResidueQuery::dt(&f, p("x", &r));
        assert!(residue_transform(&q).unwrap().is_zero());

        let f = TAdicFrame::new(&r, &["x"], &[p("3*x^2", &r)], Grading::Auto).unwrap();
        let q = ResidueQuery::dy(&f, p("x", &r)).unwrap();
        assert_eq!(residue_trace(&q).unwrap().constant_term(), qf(1, 3));
        assert_eq!(residue_transform(&q).unwrap().constant_term(), qf(1, 3));
        let q = ResidueQuery::dt(&f, p("1", &r));
        assert_eq!(residue_trace(&q).unwrap().constant_term(), Q::from_integer(2.into()));
    }

    fn q_one() -> Q {
        Q::one()
    }

    #[test]
    fn monomial_examples() {
        let r = Ring::new(&["x", "y"]).unwrap();
        assert_eq!(residue_monomial(&p("5*x^2*y", &r), &[3, 2]), Q::from_integer(5.into()));
        assert_eq!(residue_monomial(&p("1", &r), &[1, 1]), Q::one());
        let r1 = Ring::new(&["x"]).unwrap();
        assert!(residue_monomial(&p("x^3", &r1), &[3]).is_zero());
    }

    #[test]
    fn two_variable_orientation() {
        let r = Ring::new(&["x", "y"]).unwrap();
        let f = TAdicFrame::new(&r, &["x", "y"], &[p("y", &r), p("x", &r)], Grading::Auto).unwrap();
        let q = ResidueQuery::dy(&f, p("1", &r)).unwrap();
        assert_eq!(residue_trace(&q).unwrap().constant_term(), -Q::one());
        assert_eq!(residue_transform(&q).unwrap().constant_term(), -Q::one());
    }

    #[test]
    fn base_coefficients_and_section_independence() {
        let mut seen = Vec::new();
        for order in [MonomialOrder::DegRevLex, MonomialOrder::Lex] {
            let r = Ring::with_options(&["a", "x", "y"], order, 0).unwrap();
            let f = TAdicFrame::new(&r, &["x", "y"], &[p("x^2", &r), p("y^3", &r)], Grading::Auto).unwrap();
            let q = ResidueQuery::new(&f, p("a + a^2*x", &r), vec![p("x^2+y", &r), p("x*y^2", &r)]).unwrap();
            let t = residue_trace(&q).unwrap();
            assert_eq!(t, residue_transform(&q).unwrap());
            assert!(!t.is_zero());
            seen.push(t.to_string());
        }
        assert_eq!(seen[0], seen[1]);
    }

    #[test]
    fn gram_matrix_is_invertible() {
        let r = Ring::new(&["x", "y"]).unwrap();
        let f = TAdicFrame::new(&r, &["x", "y"], &[p("3*x^2", &r), p("3*y^2", &r)], Grading::Auto).unwrap();
        let g = residue_gram(&f).unwrap();
        assert_eq!(g.rows(), 4);
        assert!(g.inverse(f.field()).is_some());
    }

    #[test]
    fn atiyah_trace_examples() {
        let r = Ring::new(&["x"]).unwrap();
        let x = MF::koszul(&r, &[(p("x", &r), p("0", &r))]).unwrap();
        let f = TAdicFrame::new(&r, &["x"], &[p("x", &r)], Grading::Auto).unwrap();
        let z = MFMap::zero(&x, &x, true);
        let (l, rr) = atiyah_trace(&x, &f, &z).unwrap();
        assert!(l.is_zero() && rr.is_zero());
        let lam = PMat::from_rows(&r, vec![vec![p("0", &r), p("1", &r)], vec![p("0", &r), p("0", &r)]]);
        let lam = MFMap::new(&x, &x, true, lam).unwrap();
        let (l, rr) = atiyah_trace(&x, &f, &lam).unwrap();
        assert_eq!(l.constant_term(), -Q::one());
        assert_eq!(l, rr);
    }
}
