//! The generator `A_{z,z',θ}` on `Λ°`, its eigenspaces `W_m`, the block kernels
//! `G_m = Σ g ⊗ g / ⟨g, g⟩` and the polynomial semigroup.

use std::collections::HashMap;

use num::{One, Zero};

use crate::circ::{BiCirc, CircPoly};
use crate::error::{Error, Result};
use crate::partitions::{self, Partition};
use crate::scalar::{q_to_f64, Scalar, Q};
use crate::symalg::SymFunc;
use crate::zmeasure::{ParamTriple, ThomaPoint};

fn s(v: i64) -> Scalar {
    Scalar::from(v)
}

/// `A f` for `f ∈ Λ°`, with every `p°_1` produced on the way replaced by 1.
pub fn apply_generator(f: &CircPoly, p: &ParamTriple) -> CircPoly {
    let theta = Scalar::real(p.theta.clone());
    let e1 = &p.z + &p.zp;
    let c = Scalar::real(p.c.clone());
    let one_minus_theta = &Scalar::one() - &theta;
    let mut out = CircPoly::zero();
    let indices: Vec<usize> = {
        let mut v: Vec<usize> = f.terms().keys().flat_map(|k| k.parts().to_vec()).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    for &i in &indices {
        let di = f.derivative(i);
        if di.is_zero() {
            continue;
        }
        let ii = i as i64;
        // second order, ordered pairs (i, j)
        for &j in &indices {
            let dij = di.derivative(j);
            if dij.is_zero() {
                continue;
            }
            let w = s(ii * j as i64);
            out = out.add(&dij.mul_p(i + j - 1).scale(&w));
            out = out.sub(&dij.mul_p(i).mul_p(j).scale(&w));
        }
        // first order
        let lower = &one_minus_theta.scale(&Q::from_integer((ii * (ii - 1)).into())) + &e1.scale(&Q::from_integer(ii.into()));
        out = out.add(&di.mul_p(i - 1).scale(&lower));
        let diag = &s(ii * (ii - 1)) + &c.scale(&Q::from_integer(ii.into()));
        out = out.sub(&di.mul_p(i).scale(&diag));
        // coupling: θ Σ_{a+b+1=i} i p_a p_b ∂_i
        if i >= 3 {
            let w = theta.scale(&Q::from_integer(ii.into()));
            for a in 1..=i - 2 {
                let b = i - 1 - a;
                out = out.add(&di.mul_p(a).mul_p(b).scale(&w));
            }
        }
    }
    out
}

/// [`apply_generator`] on the image of a symmetric function.
pub fn apply_generator_sym(f: &SymFunc, p: &ParamTriple) -> Result<CircPoly> {
    Ok(apply_generator(&CircPoly::from_symfunc(f)?, p))
}

/// Expectations of `Λ°` under the z-measure from invariance alone.
///
/// `A p°_ν = -α_{|ν|} p°_ν + (lower filtration)` and `E[A f] = 0`, so each
/// monomial moment is determined by lower ones. Works at every degree.
pub struct CircExpect {
    p: ParamTriple,
    cache: HashMap<Partition, Scalar>,
}

impl CircExpect {
    pub fn new(p: &ParamTriple) -> Self {
        let mut cache = HashMap::new();
        cache.insert(Partition::empty(), Scalar::one());
        CircExpect { p: p.clone(), cache }
    }

    pub fn monomial(&mut self, nu: &Partition) -> Scalar {
        if let Some(v) = self.cache.get(nu) {
            return v.clone();
        }
        let f = CircPoly::monomial(nu);
        let n = nu.size();
        let rest = apply_generator(&f, &self.p).add(&f.scale(&Scalar::real(self.p.alpha(n))));
        debug_assert!(rest.degree().is_none_or(|d| d < n));
        let mut acc = Scalar::zero();
        for (mu, c) in rest.terms() {
            acc += c * &self.monomial(mu);
        }
        let v = acc.scale(&self.p.alpha(n).recip());
        self.cache.insert(nu.clone(), v.clone());
        v
    }

    pub fn expect(&mut self, f: &CircPoly) -> Scalar {
        let mut acc = Scalar::zero();
        for (nu, c) in f.terms() {
            acc += c * &self.monomial(nu);
        }
        acc
    }

    pub fn inner(&mut self, f: &CircPoly, g: &CircPoly) -> Scalar {
        self.expect(&f.mul(g))
    }
}

/// Column selection order for the exact null-space solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotOrder {
    /// Monomials by increasing degree, so free variables are top-degree monomials.
    Standard,
    /// Reversed monomial order; spans the same spaces with a different basis.
    Reversed,
}

#[derive(Clone, Debug)]
pub struct EigenBlock {
    pub m: usize,
    pub alpha: Q,
    pub basis: Vec<CircPoly>,
    pub norms: Vec<Scalar>,
}

#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub params: ParamTriple,
    pub max_degree: usize,
    pub blocks: Vec<EigenBlock>,
}

impl EigenSystem {
    pub fn block(&self, m: usize) -> Option<&EigenBlock> {
        self.blocks.iter().find(|b| b.m == m)
    }
}

/// Basis vectors of the null space of a dense matrix (rows × cols) over `Q(i)`.
fn nullspace(mut a: Vec<Vec<Scalar>>, cols: usize) -> Vec<Vec<Scalar>> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let inv = a[r][col].inv();
        for v in a[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for k in 0..cols {
                    if !a[r][k].is_zero() {
                        let d = &f * &a[r][k];
                        a[i][k] -= &d;
                    }
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Scalar::zero(); cols];
            v[fc] = Scalar::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][fc].clone();
            }
            v
        })
        .collect()
}

/// Exact eigenspaces `W_0, W_2, …, W_M` with orthogonal bases and Gram norms.
pub fn eigen_decompose(max_degree: usize, p: &ParamTriple) -> Result<EigenSystem> {
    eigen_decompose_with(max_degree, p, PivotOrder::Standard)
}

pub fn eigen_decompose_with(max_degree: usize, p: &ParamTriple, order: PivotOrder) -> Result<EigenSystem> {
    if !p.is_diffusion_series() {
        return Err(Error::NotAdmissible(format!("{} series has no diffusion", p.series)));
    }
    let mut monos: Vec<Partition> = Vec::new();
    for n in 0..=max_degree {
        monos.extend(partitions::enumerate_no_ones(n));
    }
    if order == PivotOrder::Reversed {
        monos.reverse();
    }
    let index: HashMap<Partition, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let images: Vec<CircPoly> = monos.iter().map(|nu| apply_generator(&CircPoly::monomial(nu), p)).collect();

    let mut expect = CircExpect::new(p);
    let mut blocks = Vec::new();
    for m in (0..=max_degree).filter(|&m| m != 1) {
        let alpha = p.alpha(m);
        let cols: Vec<usize> = (0..monos.len()).filter(|&i| monos[i].size() <= m).collect();
        let mut mat = vec![vec![Scalar::zero(); cols.len()]; cols.len()];
        for (ci, &col) in cols.iter().enumerate() {
            for (mu, v) in images[col].terms() {
                let row = cols.iter().position(|&c| c == index[mu]).expect("filtration preserved");
                mat[row][ci] += v;
            }
            mat[ci][ci] += &Scalar::real(alpha.clone());
        }
        let null = nullspace(mat, cols.len());
        let expected = partitions::count_no_ones(m) as usize;
        if null.len() != expected {
            return Err(Error::Defective {
                m,
                found: null.len(),
                expected,
            });
        }
        let raw: Vec<CircPoly> = null
            .into_iter()
            .map(|v| {
                let mut f = CircPoly::zero();
                for (ci, c) in v.into_iter().enumerate() {
                    f.add_term(monos[cols[ci]].clone(), c);
                }
                f
            })
            .collect();
        let mut basis: Vec<CircPoly> = Vec::new();
        let mut norms: Vec<Scalar> = Vec::new();
        for v in raw {
            let mut w = v.clone();
            for (g, n) in basis.iter().zip(&norms) {
                let coef = &expect.inner(&v, g) * &n.inv();
                w = w.sub(&g.scale(&coef));
            }
            let n = expect.inner(&w, &w);
            if n.is_zero() {
                return Err(Error::Defective {
                    m,
                    found: basis.len(),
                    expected,
                });
            }
            basis.push(w);
            norms.push(n);
        }
        blocks.push(EigenBlock { m, alpha, basis, norms });
    }
    Ok(EigenSystem {
        params: p.clone(),
        max_degree,
        blocks,
    })
}

/// `G_m = Σ_{g ∈ W_m} g ⊗ g / ⟨g, g⟩`; zero for `m = 1`.
#[allow(non_snake_case)]
pub fn G_from_eigen(m: usize, sys: &EigenSystem) -> Result<BiCirc> {
    if m > sys.max_degree {
        return Err(Error::Invalid(format!(
            "m = {m} exceeds the decomposition degree {}",
            sys.max_degree
        )));
    }
    let mut out = BiCirc::zero();
    if let Some(block) = sys.block(m) {
        for (g, n) in block.basis.iter().zip(&block.norms) {
            out.add_outer(g, g, &n.inv());
        }
    }
    Ok(out)
}

/// Orthogonal projection of `f` onto `W_m`.
pub fn project(f: &CircPoly, block: &EigenBlock, expect: &mut CircExpect) -> CircPoly {
    let mut out = CircPoly::zero();
    for (g, n) in block.basis.iter().zip(&block.norms) {
        out = out.add(&g.scale(&(&expect.inner(f, g) * &n.inv())));
    }
    out
}

/// `T(t) f = Σ_m e^{-tα_m} π_m f` with exact projections `π_m f`.
#[derive(Clone, Debug)]
pub struct Evolution {
    pub t: f64,
    pub components: Vec<(Q, CircPoly)>,
}

impl Evolution {
    pub fn eval(&self, omega: &ThomaPoint, theta: &Q) -> f64 {
        self.components
            .iter()
            .map(|(a, f)| (-self.t * q_to_f64(a)).exp() * f.eval(omega, theta).re_f64())
            .sum()
    }
}

pub fn semigroup_apply(t: f64, f: &CircPoly, sys: &EigenSystem) -> Result<Evolution> {
    if !(t > 0.0) {
        return Err(Error::Invalid(format!("t = {t} must be positive")));
    }
    if f.degree().unwrap_or(0) > sys.max_degree {
        return Err(Error::Invalid(format!(
            "degree {} exceeds the decomposition degree {}",
            f.degree().unwrap_or(0),
            sys.max_degree
        )));
    }
    let mut expect = CircExpect::new(&sys.params);
    let mut total = CircPoly::zero();
    let mut components = Vec::new();
    for block in &sys.blocks {
        let pf = project(f, block, &mut expect);
        total = total.add(&pf);
        if !pf.is_zero() {
            components.push((block.alpha.clone(), pf));
        }
    }
    if total != *f {
        return Err(Error::Invalid("projections do not reassemble f".into()));
    }
    Ok(Evolution { t, components })
}
