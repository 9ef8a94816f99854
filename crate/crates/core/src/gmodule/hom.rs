//! Equivariant maps: intertwiner spaces, sections, isomorphisms, subquotients.

use super::{generators, GModule, Group, Level};
use crate::error::{Error, Result};
use crate::field_tower::{Fe, TowerData};
use crate::linalg::{MatrixF, Solution};

/// Default cap on the number of projective points enumerated in a hom space.
pub const DEFAULT_ENUMERATION_BOUND: u128 = 1_000_000;

/// A linear map between modules, matrix acting on coordinate columns.
#[derive(Clone, Debug)]
pub struct EquivMap {
    pub name: String,
    pub source: GModule,
    pub target: GModule,
    pub matrix: MatrixF,
}

impl EquivMap {
    pub fn new(name: &str, source: &GModule, target: &GModule, matrix: MatrixF) -> EquivMap {
        assert_eq!(
            (matrix.rows(), matrix.cols()),
            (target.dim(), source.dim()),
            "map {name}: matrix shape does not match modules"
        );
        EquivMap {
            name: name.into(),
            source: source.clone(),
            target: target.clone(),
            matrix,
        }
    }

    fn tower(&self) -> &TowerData {
        self.source.tower()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank(self.tower())
    }
    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }
    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }
    pub fn kernel(&self) -> Vec<Vec<Fe>> {
        self.matrix.nullspace(self.tower())
    }

    /// `self . other` (apply `other` first).
    pub fn compose(&self, other: &EquivMap) -> EquivMap {
        EquivMap {
            name: format!("{}.{}", self.name, other.name),
            source: other.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&other.matrix, self.tower()),
        }
    }

    pub fn check(&self, group: Group) -> Result<()> {
        check_equivariant(self, group)
    }
}

/// Verifies `T . A_M(g) = A_N(g) . T` on the generators of `group`.
pub fn check_equivariant(map: &EquivMap, group: Group) -> Result<()> {
    let t = map.source.tower();
    for g in generators(t, group) {
        let a = map.source.action_matrix(&g)?;
        let b = map.target.action_matrix(&g)?;
        let lhs = map.matrix.mul(&a, t);
        let rhs = b.mul(&map.matrix, t);
        if lhs != rhs {
            let col = (0..lhs.cols())
                .find(|&j| lhs.col(j) != rhs.col(j))
                .unwrap_or(0);
            return Err(Error::NotEquivariant(format!(
                "{} fails for generator {:?} on basis vector {}",
                map.name,
                g.m.map(|r| r.map(|x| x.0)),
                map.source.labels()[col]
            )));
        }
    }
    Ok(())
}

fn supported(m: &GModule, group: Group) -> Result<()> {
    if m.supports(group) {
        Ok(())
    } else {
        Err(Error::UnsupportedGroup {
            group: group.to_string(),
            module: m.name().into(),
        })
    }
}

/// Rows of `T A - B T = 0` for one generator, unknowns `T[i][l]` at `i*m + l`.
fn commutation_rows(a: &MatrixF, b: &MatrixF, t: &TowerData, out: &mut Vec<Vec<Fe>>) {
    let (n, m) = (b.rows(), a.rows());
    for i in 0..n {
        for j in 0..m {
            let mut row = vec![Fe::ZERO; n * m];
            for l in 0..m {
                let x = a.get(l, j);
                if !x.is_zero() {
                    row[i * m + l] = t.add(row[i * m + l], x);
                }
            }
            for l in 0..n {
                let x = b.get(i, l);
                if !x.is_zero() {
                    row[l * m + j] = t.sub(row[l * m + j], x);
                }
            }
            if row.iter().any(|x| !x.is_zero()) {
                out.push(row);
            }
        }
    }
}

fn unflatten(v: &[Fe], n: usize, m: usize) -> MatrixF {
    MatrixF::from_fn(n, m, |i, j| v[i * m + j])
}

/// Basis of `Hom_group(M, N)`.
pub fn intertwiner_space(m: &GModule, n: &GModule, group: Group) -> Result<Vec<MatrixF>> {
    supported(m, group)?;
    supported(n, group)?;
    let t = m.tower();
    let mut rows = Vec::new();
    for g in generators(t, group) {
        commutation_rows(&m.action_matrix(&g)?, &n.action_matrix(&g)?, t, &mut rows);
    }
    let (dn, dm) = (n.dim(), m.dim());
    if rows.is_empty() {
        return Ok((0..dn * dm)
            .map(|idx| {
                let mut v = vec![Fe::ZERO; dn * dm];
                v[idx] = Fe::ONE;
                unflatten(&v, dn, dm)
            })
            .collect());
    }
    let sys = MatrixF::from_rows(&rows);
    Ok(sys
        .nullspace(t)
        .iter()
        .map(|v| unflatten(v, dn, dm))
        .collect())
}

fn coefficient_field(m: &GModule, n: &GModule) -> Vec<Fe> {
    let t = m.tower();
    if m.level() == Level::Base && n.level() == Level::Base {
        t.base_elements().to_vec()
    } else {
        t.all_elements().collect()
    }
}

/// Calls `f` on each normalized coefficient vector (first nonzero entry 1).
fn for_each_projective(d: usize, field: &[Fe], mut f: impl FnMut(&[Fe]) -> bool) {
    let q = field.len();
    let one = field
        .iter()
        .position(|&x| x == Fe::ONE)
        .expect("field has 1");
    for lead in 0..d {
        let free = d - lead - 1;
        let total = q.pow(free as u32);
        let mut coeffs = vec![Fe::ZERO; d];
        coeffs[lead] = field[one];
        for idx in 0..total {
            let mut rest = idx;
            for slot in coeffs.iter_mut().skip(lead + 1) {
                *slot = field[rest % q];
                rest /= q;
            }
            if !f(&coeffs) {
                return;
            }
        }
    }
}

fn combine(basis: &[MatrixF], coeffs: &[Fe], t: &TowerData) -> MatrixF {
    let mut acc = MatrixF::zeros(basis[0].rows(), basis[0].cols());
    for (b, &c) in basis.iter().zip(coeffs) {
        if !c.is_zero() {
            acc = acc.add(&b.scale(c, t), t);
        }
    }
    acc
}

fn projective_count(q: usize, d: usize) -> u128 {
    let q = q as u128;
    (q.pow(d as u32) - 1) / (q - 1)
}

/// Maximum rank of a nonzero element of `Hom_group(M, N)`, by enumeration of
/// the projectivized hom space.
pub fn max_rank_in_hom(m: &GModule, n: &GModule, group: Group, bound: u128) -> Result<usize> {
    let basis = intertwiner_space(m, n, group)?;
    if basis.is_empty() {
        return Ok(0);
    }
    let t = m.tower();
    let field = coefficient_field(m, n);
    let needed = projective_count(field.len(), basis.len());
    if needed > bound {
        return Err(Error::EnumerationBound { needed, bound });
    }
    let cap = m.dim().min(n.dim());
    let mut best = 0;
    for_each_projective(basis.len(), &field, |c| {
        best = best.max(combine(&basis, c, t).rank(t));
        best < cap
    });
    Ok(best)
}

/// First invertible element of `Hom_group(M, N)` in enumeration order.
pub fn find_isomorphism(
    m: &GModule,
    n: &GModule,
    group: Group,
    bound: u128,
) -> Result<Option<MatrixF>> {
    if m.dim() != n.dim() {
        return Ok(None);
    }
    let basis = intertwiner_space(m, n, group)?;
    if basis.is_empty() {
        return Ok(None);
    }
    let t = m.tower();
    let field = coefficient_field(m, n);
    let needed = projective_count(field.len(), basis.len());
    if needed > bound {
        return Err(Error::EnumerationBound { needed, bound });
    }
    let mut found = None;
    for_each_projective(basis.len(), &field, |c| {
        let cand = combine(&basis, c, t);
        if cand.is_invertible(t) {
            found = Some(cand);
            false
        } else {
            true
        }
    });
    Ok(found)
}

#[derive(Clone, Debug)]
pub enum SectionOutcome {
    Section(MatrixF),
    /// `y` with `y A = 0`, `y b != 0` for the affine system of equivariant sections.
    Empty {
        certificate: Vec<Fe>,
    },
}

impl SectionOutcome {
    pub fn exists(&self) -> bool {
        matches!(self, SectionOutcome::Section(_))
    }
}

/// Looks for an equivariant `s : Q -> M` with `pi . s = id`.
pub fn section_exists(pi: &EquivMap, group: Group) -> Result<SectionOutcome> {
    let (m, q) = (&pi.source, &pi.target);
    let t = m.tower();
    check_equivariant(pi, group)?;
    if !pi.is_surjective() {
        return Err(Error::NotSurjective(format!(
            "{} has rank {} < {}",
            pi.name,
            pi.rank(),
            q.dim()
        )));
    }
    // unknown s is dim M x dim Q
    let (dm, dq) = (m.dim(), q.dim());
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for g in generators(t, group) {
        let before = rows.len();
        commutation_rows(&q.action_matrix(&g)?, &m.action_matrix(&g)?, t, &mut rows);
        rhs.resize(rhs.len() + rows.len() - before, Fe::ZERO);
    }
    // (pi s)[i][j] = sum_l pi[i][l] s[l][j]
    for i in 0..dq {
        for j in 0..dq {
            let mut row = vec![Fe::ZERO; dm * dq];
            for l in 0..dm {
                row[l * dq + j] = pi.matrix.get(i, l);
            }
            rows.push(row);
            rhs.push(if i == j { Fe::ONE } else { Fe::ZERO });
        }
    }
    let sys = MatrixF::from_rows(&rows);
    Ok(match sys.solve(&rhs, t) {
        Solution::Solved(x) => SectionOutcome::Section(unflatten(&x, dm, dq)),
        Solution::Inconsistent(y) => SectionOutcome::Empty { certificate: y },
    })
}

/// A submodule, the quotient by it, and the quotient projection.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub sub: GModule,
    pub quotient: GModule,
    /// Columns: column-reduced echelon basis of the submodule.
    pub inclusion: MatrixF,
    /// `dim quotient x dim M`.
    pub projection: MatrixF,
}

fn invariant_basis(m: &GModule, span: &MatrixF) -> Result<(MatrixF, Vec<usize>)> {
    let t = m.tower();
    let (basis, pivots) = span.column_echelon(t);
    for &grp in m.groups() {
        for g in generators(t, grp) {
            let img = m.action_matrix(&g)?.mul(&basis, t);
            if !basis.spans(&img, t) {
                let col = (0..img.cols())
                    .find(|&j| !basis.spans(&MatrixF::from_cols(&[img.col(j)], img.rows()), t))
                    .unwrap_or(0);
                return Err(Error::NotInvariant(format!(
                    "generator {:?} moves basis vector {col} out of the span",
                    g.m.map(|r| r.map(|x| x.0))
                )));
            }
        }
    }
    Ok((basis, pivots))
}

/// Quotient by the span of `vectors`, using the complementary standard basis
/// vectors as quotient representatives.
pub fn subquotient(m: &GModule, vectors: &[Vec<Fe>]) -> Result<Subquotient> {
    let span = MatrixF::from_cols(vectors, m.dim());
    let (basis, pivots) = invariant_basis(m, &span)?;
    let rest: Vec<usize> = (0..m.dim()).filter(|i| !pivots.contains(i)).collect();
    let complement = MatrixF::from_fn(m.dim(), rest.len(), |i, j| {
        if rest[j] == i {
            Fe::ONE
        } else {
            Fe::ZERO
        }
    });
    let labels = rest.iter().map(|&i| m.labels()[i].clone()).collect();
    build_subquotient(m, basis, pivots, complement, labels)
}

/// Quotient by the span of `vectors` with explicit representatives `complement`.
pub fn quotient_with_complement(
    m: &GModule,
    vectors: &[Vec<Fe>],
    complement: &[Vec<Fe>],
    labels: Vec<String>,
) -> Result<Subquotient> {
    let span = MatrixF::from_cols(vectors, m.dim());
    let (basis, pivots) = invariant_basis(m, &span)?;
    let comp = MatrixF::from_cols(complement, m.dim());
    build_subquotient(m, basis, pivots, comp, labels)
}

fn build_subquotient(
    m: &GModule,
    basis: MatrixF,
    pivots: Vec<usize>,
    complement: MatrixF,
    labels: Vec<String>,
) -> Result<Subquotient> {
    let t = m.tower();
    let r = basis.cols();
    let full = basis.hstack(&complement);
    let inv = full.inverse(t).ok_or_else(|| {
        Error::Singular("quotient representatives do not complete the submodule".into())
    })?;
    let projection = inv.select_rows(&(r..m.dim()).collect::<Vec<_>>());
    let sub = m.submodule_unchecked(basis.clone(), pivots, format!("sub({})", m.name()));
    let quotient = m.quotient_unchecked(
        complement,
        projection.clone(),
        labels,
        format!("{}/sub", m.name()),
    );
    Ok(Subquotient {
        sub,
        quotient,
        inclusion: basis,
        projection,
    })
}
