//! Reduced Gröbner bases with cofactors, normal forms and zero-dimensional quotients.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Field, QMat};
use crate::poly::{mono_degree, mono_div, mono_divides, mono_lcm, same_ring, Mono, Poly, RingRef, Q};

/// A reduced Gröbner basis together with cofactors over the original generators.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: RingRef,
    gens: Vec<Poly>,
    basis: Vec<Poly>,
    leads: Vec<Mono>,
    cofactors: Vec<Vec<Poly>>,
}

/// Result of the division algorithm: `p = Σ quotients[i]·basis[i] + remainder`.
#[derive(Clone, Debug)]
pub struct Division {
    pub quotients: Vec<Poly>,
    pub remainder: Poly,
}

/// Working polynomial: terms keyed by monomial, with a cached sorted order.
struct Work<'a> {
    ring: &'a RingRef,
    terms: BTreeMap<Mono, Q>,
}

impl<'a> Work<'a> {
    fn new(p: &Poly) -> Work<'_> {
        Work {
            ring: p.ring(),
            terms: p.raw_terms().map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    fn leading(&self) -> Option<(Mono, Q)> {
        self.terms
            .iter()
            .max_by(|a, b| self.ring.cmp_mono(a.0, b.0))
            .map(|(m, c)| (m.clone(), c.clone()))
    }

    /// self -= c·m·g
    fn sub_scaled(&mut self, g: &Poly, m: &[u32], c: &Q) {
        for (gm, gc) in g.raw_terms() {
            let key: Mono = gm.iter().zip(m).map(|(a, b)| a + b).collect();
            let delta = self.ring.normalize(-(c * gc));
            use std::collections::btree_map::Entry;
            match self.terms.entry(key) {
                Entry::Vacant(v) => {
                    if !delta.is_zero() {
                        v.insert(delta);
                    }
                }
                Entry::Occupied(mut o) => {
                    let s = self.ring.normalize(o.get() + delta);
                    if s.is_zero() {
                        o.remove();
                    } else {
                        *o.get_mut() = s;
                    }
                }
            }
        }
    }
}

fn divide_by(p: &Poly, basis: &[Poly], leads: &[Mono]) -> Division {
    let ring = p.ring();
    let mut quotients = vec![Poly::zero(ring); basis.len()];
    let mut remainder = Poly::zero(ring);
    let mut w = Work::new(p);
    while let Some((m, c)) = w.leading() {
        match leads.iter().position(|l| mono_divides(l, &m)) {
            Some(i) => {
                let lc = basis[i].coeff(&leads[i]);
                let f = ring.normalize(&c / &lc);
                let shift = mono_div(&m, &leads[i]);
                quotients[i].add_term(shift.clone(), f.clone());
                w.sub_scaled(&basis[i], &shift, &f);
            }
            None => {
                w.terms.remove(&m);
                remainder.add_term(m, c);
            }
        }
    }
    Division {
        quotients,
        remainder,
    }
}

fn lead_of(p: &Poly) -> Mono {
    p.leading().expect("nonzero").0.clone()
}

impl GroebnerBasis {
    /// Buchberger's algorithm with normal selection and both criteria.
    pub fn new(gens: &[Poly]) -> Result<GroebnerBasis> {
        let ring = match gens.first() {
            Some(g) => g.ring().clone(),
            None => return Err(Error::InvalidRing("no generators".into())),
        };
        for g in gens {
            if !same_ring(g.ring(), &ring) {
                return Err(Error::ContextMismatch("generators in different rings".into()));
            }
        }
        let r = gens.len();
        let unit_row = |j: usize| -> Vec<Poly> {
            (0..r)
                .map(|k| if k == j { Poly::one(&ring) } else { Poly::zero(&ring) })
                .collect()
        };
        let mut polys: Vec<Poly> = Vec::new();
        let mut cofs: Vec<Vec<Poly>> = Vec::new();
        let mut leads: Vec<Mono> = Vec::new();
        for (j, g) in gens.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            polys.push(g.clone());
            cofs.push(unit_row(j));
            leads.push(lead_of(g));
        }
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for j in 0..polys.len() {
            for i in 0..j {
                pairs.push((i, j));
            }
        }
        let mut done: std::collections::BTreeSet<(usize, usize)> = Default::default();
        while !pairs.is_empty() {
            // normal selection: smallest lcm in the monomial order, ties by index
            let best = (0..pairs.len())
                .min_by(|&a, &b| {
                    let la = mono_lcm(&leads[pairs[a].0], &leads[pairs[a].1]);
                    let lb = mono_lcm(&leads[pairs[b].0], &leads[pairs[b].1]);
                    ring.cmp_mono(&la, &lb).then(pairs[a].cmp(&pairs[b]))
                })
                .unwrap();
            let (i, j) = pairs.remove(best);
            done.insert((i, j));
            let l = mono_lcm(&leads[i], &leads[j]);
            // product criterion
            if l.iter()
                .zip(leads[i].iter().zip(&leads[j]))
                .all(|(x, (a, b))| *x == a + b)
            {
                continue;
            }
            // chain criterion
            let chain = (0..polys.len()).any(|k| {
                k != i
                    && k != j
                    && mono_divides(&leads[k], &l)
                    && done.contains(&(i.min(k), i.max(k)))
                    && done.contains(&(j.min(k), j.max(k)))
            });
            if chain {
                continue;
            }
            let ci = polys[i].coeff(&leads[i]);
            let cj = polys[j].coeff(&leads[j]);
            let mi = mono_div(&l, &leads[i]);
            let mj = mono_div(&l, &leads[j]);
            let fi = ring.normalize(Q::one() / &ci);
            let fj = ring.normalize(Q::one() / &cj);
            let s = &polys[i].mul_term(&mi, &fi) - &polys[j].mul_term(&mj, &fj);
            let mut scof: Vec<Poly> = (0..r)
                .map(|k| &cofs[i][k].mul_term(&mi, &fi) - &cofs[j][k].mul_term(&mj, &fj))
                .collect();
            let div = divide_by(&s, &polys, &leads);
            if div.remainder.is_zero() {
                continue;
            }
            for (qi, q) in div.quotients.iter().enumerate() {
                if q.is_zero() {
                    continue;
                }
                for k in 0..r {
                    scof[k] = &scof[k] - &(q * &cofs[qi][k]);
                }
            }
            let n = polys.len();
            leads.push(lead_of(&div.remainder));
            polys.push(div.remainder);
            cofs.push(scof);
            for k in 0..n {
                pairs.push((k, n));
            }
        }
        // minimalize
        let mut keep: Vec<usize> = Vec::new();
        for i in 0..polys.len() {
            let redundant = (0..polys.len()).any(|k| {
                k != i
                    && mono_divides(&leads[k], &leads[i])
                    && (leads[k] != leads[i] || k < i)
            });
            if !redundant {
                keep.push(i);
            }
        }
        keep.sort_by(|&a, &b| ring.cmp_mono(&leads[a], &leads[b]));
        let mut basis: Vec<Poly> = keep.iter().map(|&i| polys[i].clone()).collect();
        let mut bcofs: Vec<Vec<Poly>> = keep.iter().map(|&i| cofs[i].clone()).collect();
        let bleads: Vec<Mono> = keep.iter().map(|&i| leads[i].clone()).collect();
        // make monic, then interreduce tails
        for i in 0..basis.len() {
            let inv = ring.normalize(Q::one() / basis[i].coeff(&bleads[i]));
            basis[i] = basis[i].scale(&inv);
            bcofs[i] = bcofs[i].iter().map(|c| c.scale(&inv)).collect();
        }
        for i in 0..basis.len() {
            let others: Vec<usize> = (0..basis.len()).filter(|&k| k != i).collect();
            let ob: Vec<Poly> = others.iter().map(|&k| basis[k].clone()).collect();
            let ol: Vec<Mono> = others.iter().map(|&k| bleads[k].clone()).collect();
            let div = divide_by(&basis[i], &ob, &ol);
            let mut cof = bcofs[i].clone();
            for (idx, q) in div.quotients.iter().enumerate() {
                if q.is_zero() {
                    continue;
                }
                let k = others[idx];
                for c in 0..r {
                    cof[c] = &cof[c] - &(q * &bcofs[k][c]);
                }
            }
            basis[i] = div.remainder;
            bcofs[i] = cof;
        }
        Ok(GroebnerBasis {
            ring,
            gens: gens.to_vec(),
            basis,
            leads: bleads,
            cofactors: bcofs,
        })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    /// Reduced, monic basis sorted by leading monomial ascending.
    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn leading_monomials(&self) -> &[Mono] {
        &self.leads
    }

    /// `cofactors()[i][j]` is the coefficient of generator `j` in basis element `i`.
    pub fn cofactors(&self) -> &[Vec<Poly>] {
        &self.cofactors
    }

    fn check(&self, p: &Poly) -> Result<()> {
        if same_ring(p.ring(), &self.ring) {
            Ok(())
        } else {
            Err(Error::ContextMismatch("polynomial and basis rings differ".into()))
        }
    }

    pub fn divide(&self, p: &Poly) -> Result<Division> {
        self.check(p)?;
        Ok(divide_by(p, &self.basis, &self.leads))
    }

    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        Ok(self.divide(p)?.remainder)
    }

    pub fn contains(&self, p: &Poly) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// Cofactors `a` over the original generators with `p = Σ a_j·gen_j`.
    pub fn ideal_lift(&self, p: &Poly) -> Result<Vec<Poly>> {
        let div = self.divide(p)?;
        if !div.remainder.is_zero() {
            return Err(Error::NotInIdeal);
        }
        let mut out = vec![Poly::zero(&self.ring); self.gens.len()];
        for (i, q) in div.quotients.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            for (j, c) in self.cofactors[i].iter().enumerate() {
                if !c.is_zero() {
                    out[j] = &out[j] + &(q * c);
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero_dimensional(&self) -> bool {
        (0..self.ring.nvars()).all(|v| {
            self.leads
                .iter()
                .any(|l| l[v] > 0 && l.iter().enumerate().all(|(k, &e)| k == v || e == 0))
        })
    }
}

/// `R/I` for a zero-dimensional ideal, with its standard monomial basis.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    gb: GroebnerBasis,
    basis: Vec<Mono>,
    index: BTreeMap<Mono, usize>,
}

impl QuotientAlgebra {
    pub fn new(gb: GroebnerBasis) -> Result<QuotientAlgebra> {
        let ring = gb.ring().clone();
        let n = ring.nvars();
        let mut bounds = vec![0u32; n];
        for (v, b) in bounds.iter_mut().enumerate() {
            let pure = gb
                .leads
                .iter()
                .filter(|l| l.iter().enumerate().all(|(k, &e)| k == v || e == 0) && l[v] > 0)
                .map(|l| l[v])
                .min();
            match pure {
                Some(e) => *b = e,
                None => {
                    return Err(Error::NotZeroDimensional(format!(
                        "no pure power of `{}` among leading terms",
                        ring.vars()[v]
                    )))
                }
            }
        }
        let mut basis = Vec::new();
        let mut cur = vec![0u32; n];
        'outer: loop {
            if !gb.leads.iter().any(|l| mono_divides(l, &cur)) {
                basis.push(cur.clone());
            }
            for v in (0..n).rev() {
                cur[v] += 1;
                if cur[v] < bounds[v] {
                    continue 'outer;
                }
                cur[v] = 0;
            }
            break;
        }
        basis.sort_by(|a, b| ring.cmp_mono(a, b));
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Ok(QuotientAlgebra { gb, basis, index })
    }

    pub fn from_generators(gens: &[Poly]) -> Result<QuotientAlgebra> {
        QuotientAlgebra::new(GroebnerBasis::new(gens)?)
    }

    pub fn groebner(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn ring(&self) -> &RingRef {
        self.gb.ring()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Standard monomials, ascending in the monomial order.
    pub fn basis(&self) -> &[Mono] {
        &self.basis
    }

    pub fn basis_poly(&self, i: usize) -> Poly {
        Poly::monomial(self.ring(), self.basis[i].clone(), Q::one())
    }

    pub fn index_of(&self, m: &[u32]) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        self.gb.normal_form(p)
    }

    /// Coordinates of NF(p) in the standard basis.
    pub fn coords(&self, p: &Poly) -> Result<Vec<Q>> {
        let nf = self.normal_form(p)?;
        let mut v = vec![Q::zero(); self.dim()];
        for (m, c) in nf.raw_terms() {
            v[self.index[m]] = c.clone();
        }
        Ok(v)
    }

    pub fn from_coords(&self, v: &[Q]) -> Poly {
        Poly::from_terms(
            self.ring(),
            v.iter()
                .enumerate()
                .map(|(i, c)| (self.basis[i].clone(), c.clone())),
        )
    }

    /// Matrix of multiplication by `r`; column `m` holds NF(r·e_m).
    pub fn mult_operator(&self, r: &Poly) -> Result<QMat> {
        let cols: Result<Vec<Vec<Q>>> = (0..self.dim())
            .map(|m| self.coords(&(r * &self.basis_poly(m))))
            .collect();
        Ok(QMat::from_columns(self.dim(), &cols?))
    }

    pub fn field(&self) -> Field {
        Field::new(self.ring().characteristic())
    }

    /// Largest total degree among standard monomials.
    pub fn socle_degree(&self) -> u32 {
        self.basis.iter().map(|m| mono_degree(m)).max().unwrap_or(0)
    }
}

pub fn groebner_basis(gens: &[Poly]) -> Result<GroebnerBasis> {
    GroebnerBasis::new(gens)
}

pub fn quotient_algebra(gb: GroebnerBasis) -> Result<QuotientAlgebra> {
    QuotientAlgebra::new(gb)
}

pub fn operator_trace(m: &QMat) -> Q {
    m.trace()
}

/// Compare monomials in the given ring's order (convenience for callers sorting keys).
pub fn cmp_in(ring: &RingRef, a: &[u32], b: &[u32]) -> Ordering {
    ring.cmp_mono(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, q, qf, MonomialOrder, Ring};

    fn ps(r: &RingRef, s: &[&str]) -> Vec<Poly> {
        s.iter().map(|x| parse_polynomial(x, r).unwrap()).collect()
    }

    #[test]
    fn already_reduced() {
        let r = Ring::with_options(&["x", "y"], MonomialOrder::Lex, 0).unwrap();
        let gb = GroebnerBasis::new(&ps(&r, &["x^2", "x*y", "y^2"])).unwrap();
        let mut got: Vec<String> = gb.basis().iter().map(|p| p.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["x*y", "x^2", "y^2"]);
    }

    #[test]
    fn monic_with_cofactor() {
        let r = Ring::new(&["x"]).unwrap();
        let gb = GroebnerBasis::new(&ps(&r, &["3*x^2"])).unwrap();
        assert_eq!(gb.basis()[0].to_string(), "x^2");
        assert_eq!(gb.cofactors()[0][0], Poly::constant(&r, qf(1, 3)));
    }

    #[test]
    fn linear_pair() {
        let r = Ring::new(&["x", "y"]).unwrap();
        let gb = GroebnerBasis::new(&ps(&r, &["x+y", "x-y"])).unwrap();
        let b: Vec<String> = gb.basis().iter().map(|p| p.to_string()).collect();
        assert_eq!(b, vec!["y", "x"]);
        // y = 1/2(x+y) - 1/2(x-y), x = 1/2(x+y) + 1/2(x-y)
        let c = gb.cofactors();
        assert_eq!(c[0], vec![Poly::constant(&r, qf(1, 2)), Poly::constant(&r, qf(-1, 2))]);
        assert_eq!(c[1], vec![Poly::constant(&r, qf(1, 2)), Poly::constant(&r, qf(1, 2))]);
    }

    #[test]
    fn normal_forms() {
        let r = Ring::new(&["x", "y"]).unwrap();
        let gb = GroebnerBasis::new(&ps(&r, &["x^2"])).unwrap();
        assert!(gb.normal_form(&ps(&r, &["x^3"])[0]).unwrap().is_zero());
        assert_eq!(gb.normal_form(&ps(&r, &["x+1"])[0]).unwrap().to_string(), "x + 1");
        let gb2 = GroebnerBasis::new(&ps(&r, &["x^2", "y^2"])).unwrap();
        assert_eq!(gb2.normal_form(&ps(&r, &["x^2*y + y"])[0]).unwrap().to_string(), "y");
    }

    #[test]
    fn lifts() {
        let r = Ring::new(&["x", "y"]).unwrap();
        let gb = GroebnerBasis::new(&ps(&r, &["x^2"])).unwrap();
        assert_eq!(gb.ideal_lift(&ps(&r, &["x^3"])[0]).unwrap(), ps(&r, &["x"]));
        assert!(gb.ideal_lift(&Poly::zero(&r)).unwrap()[0].is_zero());
        let gb2 = GroebnerBasis::new(&ps(&r, &["x", "y"])).unwrap();
        assert_eq!(gb2.ideal_lift(&ps(&r, &["x^2+y^2"])[0]).unwrap(), ps(&r, &["x", "y"]));
        assert_eq!(gb.ideal_lift(&ps(&r, &["x"])[0]), Err(Error::NotInIdeal));
    }

    #[test]
    fn quotients() {
        let r1 = Ring::new(&["x"]).unwrap();
        let a = QuotientAlgebra::from_generators(&ps(&r1, &["x^2"])).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.mult_operator(&ps(&r1, &["x"])[0]).unwrap(), QMat::from_i64(&[&[0, 0], &[1, 0]]));
        assert_eq!(a.mult_operator(&Poly::one(&r1)).unwrap(), QMat::identity(2));
        assert!(a.mult_operator(&ps(&r1, &["x^2"])[0]).unwrap().is_zero());
        assert_eq!(operator_trace(&a.mult_operator(&ps(&r1, &["x"])[0]).unwrap()), q(0));

        let r2 = Ring::new(&["x", "y"]).unwrap();
        let b = QuotientAlgebra::from_generators(&ps(&r2, &["3*x^2", "3*y^2"])).unwrap();
        let names: Vec<String> = (0..b.dim()).map(|i| b.basis_poly(i).to_string()).collect();
        assert_eq!(names, vec!["1", "y", "x", "x*y"]);
        assert_eq!(operator_trace(&b.mult_operator(&Poly::one(&r2)).unwrap()), q(4));
        let c = QuotientAlgebra::from_generators(&ps(&r1, &["x"])).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(matches!(
            QuotientAlgebra::from_generators(&ps(&r2, &["x^2"])),
            Err(Error::NotZeroDimensional(_))
        ));
    }
}
