//! Class-level Δ_g: matrices, the degree-2 extension formula, Künneth and Bockstein checks.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cochain::{Cochain, ExtensionCocycle};
use crate::cohomology::{cohomology_space, CohomologyClass};
use crate::error::{BvhError, Result};
use crate::field::Fp;
use crate::group::{DirectProduct, Group};
use crate::linalg::{rank_kernel_image, SparseMatrix};

/// The matrix of Δ_g: H^n → H^{n-1}; `matrix[i][j]` is coordinate `i` of Δ_g(basis_j).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DeltaMatrix {
    pub group: String,
    pub p: u32,
    pub element: String,
    pub degree: usize,
    pub source_basis: Vec<String>,
    pub target_basis: Vec<String>,
    pub matrix: Vec<Vec<u32>>,
    pub rank: usize,
}

impl DeltaMatrix {
    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|&x| x == 0)
    }

    /// Column `j` as coordinates in the target basis.
    pub fn column(&self, j: usize) -> Vec<u32> {
        self.matrix.iter().map(|row| row[j]).collect()
    }

    /// Span of the image, as reduced coordinate vectors.
    pub fn image(&self, f: Fp) -> Vec<Vec<u32>> {
        let cols: Vec<Vec<u32>> = (0..self.source_basis.len()).map(|j| self.column(j)).collect();
        let m = SparseMatrix::from_dense(f, &cols, self.target_basis.len()).expect("rectangular");
        rank_kernel_image(&m.transpose()).image.vectors().to_vec()
    }
}

/// Rank of a dense matrix over F_p.
pub fn matrix_rank(f: Fp, m: &[Vec<u32>], cols: usize) -> usize {
    if m.is_empty() || cols == 0 {
        return 0;
    }
    rank_kernel_image(&SparseMatrix::from_dense(f, m, cols).expect("rectangular")).rank
}

/// `a · b` for dense matrices with `a` of shape r×k and `b` of shape k×c.
pub fn matrix_mul(f: Fp, a: &[Vec<u32>], b: &[Vec<u32>], c: usize) -> Vec<Vec<u32>> {
    a.iter()
        .map(|row| {
            (0..c)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(0, |acc, (&x, brow)| f.add(acc, f.mul(x, brow[j])))
                })
                .collect()
        })
        .collect()
}

pub fn matrix_add(f: Fp, a: &[Vec<u32>], b: &[Vec<u32>]) -> Vec<Vec<u32>> {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(&x, &y)| f.add(x, y)).collect())
        .collect()
}

/// The p-part of `g`: the power `g^k` with `k ≡ 1` mod the p-part of the order and `k ≡ 0` mod the rest.
pub fn p_part(group: &Group, g: usize, p: u32) -> usize {
    let o = group.element_order(g);
    let mut pa = 1;
    while o.is_multiple_of(pa * p as usize) {
        pa *= p as usize;
    }
    let m = o / pa;
    let k = (0..o).find(|&k| k % pa == 1 % pa && k % m == 0).unwrap_or(0);
    group.pow(g, k as i64)
}

/// The element whose Δ is used for `g`: `g` itself if central, else its central p-part.
pub fn effective_element(group: &Group, g: usize, p: u32) -> Result<usize> {
    if group.is_central(g) {
        return Ok(g);
    }
    let gp = p_part(group, g, p);
    if group.is_central(gp) {
        Ok(gp)
    } else {
        Err(BvhError::NotCentral(group.label(g).to_string()))
    }
}

/// Δ_g of a class, through a representative cocycle.
pub fn delta_class(g: usize, c: &CohomologyClass) -> Result<CohomologyClass> {
    let space = c.space();
    let group = space.group();
    let n = c.degree();
    if n == 0 {
        return Err(BvhError::Mismatch("delta needs degree at least 1".into()));
    }
    let g = effective_element(group, g, space.field().p())?;
    let image = c.representative().delta_g(g)?;
    cohomology_space(group, space.field(), n - 1)?.class_of(&image)
}

pub fn delta_matrix(group: &Arc<Group>, f: Fp, g: usize, n: usize) -> Result<DeltaMatrix> {
    if n == 0 {
        return Err(BvhError::Mismatch("delta needs degree at least 1".into()));
    }
    let ge = effective_element(group, g, f.p())?;
    let src = cohomology_space(group, f, n)?;
    let tgt = cohomology_space(group, f, n - 1)?;
    let mut matrix = vec![vec![0u32; src.dim()]; tgt.dim()];
    for j in 0..src.dim() {
        let image = src.representative(j).delta_g(ge)?;
        let coords = tgt.coordinates(&image)?;
        for (i, c) in coords.into_iter().enumerate() {
            matrix[i][j] = c;
        }
    }
    let rank = matrix_rank(f, &matrix, src.dim());
    Ok(DeltaMatrix {
        group: group.name().to_string(),
        p: f.p(),
        element: group.label(g).to_string(),
        degree: n,
        source_basis: src.labels().to_vec(),
        target_basis: tgt.labels().to_vec(),
        matrix,
        rank,
    })
}

/// Matrix of the Bockstein H^n → H^{n+1} in the stored bases.
pub fn bockstein_matrix(group: &Arc<Group>, f: Fp, n: usize) -> Result<Vec<Vec<u32>>> {
    let src = cohomology_space(group, f, n)?;
    let tgt = cohomology_space(group, f, n + 1)?;
    let mut matrix = vec![vec![0u32; src.dim()]; tgt.dim()];
    for j in 0..src.dim() {
        let coords = tgt.coordinates(&src.representative(j).bockstein()?)?;
        for (i, c) in coords.into_iter().enumerate() {
            matrix[i][j] = c;
        }
    }
    Ok(matrix)
}

/// Δ_g of the extension class against the commutators of lifts in the constructed extension.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ExtensionDeltaReport {
    pub element: String,
    /// `h ↦ α(g,h) - α(h,g)` for every element `h`
    pub formula: Vec<u32>,
    /// `[ĝ, ĥ]` for every element `h`
    pub commutators: Vec<u32>,
    pub agrees: bool,
}

pub fn delta_from_extension(e: &ExtensionCocycle, g: usize) -> Result<ExtensionDeltaReport> {
    let base = e.base();
    if !base.is_central(g) {
        return Err(BvhError::NotCentral(base.label(g).to_string()));
    }
    let d = e.alpha().delta_g(g)?;
    let f = e.alpha().field();
    let formula: Vec<u32> = (0..base.order())
        .map(|h| if h == base.identity() { 0 } else { d.eval(&[h]) })
        .collect();
    let direct: Vec<u32> = (0..base.order())
        .map(|h| f.sub(e.alpha().eval(&[g, h]), e.alpha().eval(&[h, g])))
        .collect();
    let commutators = (0..base.order())
        .map(|h| e.commutator(g, h))
        .collect::<Result<Vec<u32>>>()?;
    Ok(ExtensionDeltaReport {
        element: base.label(g).to_string(),
        agrees: formula == commutators && direct == formula,
        formula,
        commutators,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct KunnethReport {
    pub lhs: Vec<u32>,
    pub rhs: Vec<u32>,
    pub passed: bool,
}

/// Compare `Δ_{(g,h)}(x × y)` with `Δ_g(x) × y + (-1)^{|x|} x × Δ_h(y)` in cohomology of `G × H`.
pub fn kunneth_delta_check(
    prod: &DirectProduct,
    g: usize,
    h: usize,
    x: &CohomologyClass,
    y: &CohomologyClass,
) -> Result<KunnethReport> {
    let f = x.space().field();
    let (m, n) = (x.degree(), y.degree());
    if m + n == 0 {
        return Ok(KunnethReport {
            lhs: vec![],
            rhs: vec![],
            passed: true,
        });
    }
    let xr = x.representative();
    let yr = y.representative();
    let gh = prod.pair(g, h);
    let lhs = xr.cross_product(&yr, prod)?.delta_g(gh)?;
    let mut rhs = Cochain::zero(&prod.group, f, m + n - 1);
    if m > 0 {
        rhs = rhs.add(&xr.delta_g(g)?.cross_product(&yr, prod)?)?;
    }
    if n > 0 {
        let t = xr.cross_product(&yr.delta_g(h)?, prod)?;
        rhs = rhs.add(&t.scale(f.sign(m)))?;
    }
    let space = cohomology_space(&prod.group, f, m + n - 1)?;
    let lhs = space.coordinates(&lhs)?;
    let rhs = space.coordinates(&rhs)?;
    Ok(KunnethReport {
        passed: lhs == rhs,
        lhs,
        rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_group_spec;

    fn grp(s: &str) -> Arc<Group> {
        Arc::new(parse_group_spec(s).unwrap())
    }

    #[test]
    fn degree_one_is_evaluation() {
        let d8 = grp("dihedral:8");
        let f = Fp::new(2).unwrap();
        let gamma = d8.element("gamma").unwrap();
        let m = delta_matrix(&d8, f, gamma, 1).unwrap();
        assert!(m.is_zero());
        let c4 = grp("cyclic:4");
        let m = delta_matrix(&c4, f, 1, 1).unwrap();
        assert_eq!(m.matrix, vec![vec![1]]);
    }

    #[test]
    fn dihedral_degree_two() {
        let d8 = grp("dihedral:8");
        let f = Fp::new(2).unwrap();
        let gamma = d8.element("gamma").unwrap();
        let m = delta_matrix(&d8, f, gamma, 2).unwrap();
        assert_eq!(m.rank, 1);
        assert_eq!(m.image(f), vec![vec![1, 1]]);
    }

    #[test]
    fn p_parts() {
        let c6 = grp("cyclic:6");
        assert_eq!(p_part(&c6, 1, 2), 3);
        assert_eq!(p_part(&c6, 1, 3), 4);
        assert_eq!(p_part(&c6, 0, 2), 0);
    }

    #[test]
    fn identity_gives_zero() {
        let q8 = grp("quaternion:8");
        let f = Fp::new(2).unwrap();
        for n in 1..=3 {
            assert!(delta_matrix(&q8, f, q8.identity(), n).unwrap().is_zero());
        }
    }
}
