//! Representations with exact action matrices, their standard constructions,
//! and an intertwiner solver.

mod check;
mod group;
mod hom;

use std::fmt;
use std::sync::Arc;

pub use check::{check_representation, RepCheck};
pub use group::{
    alternative_word, bruhat_decompose, generators, p1_index, p1_points, random_elem, unitary_word,
    word_product, Atom, GenWord, Group, GroupElem,
};
pub use hom::{
    check_equivariant, find_isomorphism, intertwiner_space, max_rank_in_hom,
    quotient_with_complement, section_exists, subquotient, EquivMap, SectionOutcome, Subquotient,
    DEFAULT_ENUMERATION_BOUND,
};

use crate::error::{Error, Result};
use crate::field_tower::{binomial_mod, Fe, FieldTower, TowerData};
use crate::linalg::MatrixF;

/// Which field of the tower a module is defined over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Base,
    Quadratic,
}

pub type AtomRule = Arc<dyn Fn(&Atom) -> Result<MatrixF> + Send + Sync>;
pub type ElemRule = Arc<dyn Fn(&GroupElem) -> MatrixF + Send + Sync>;

enum Kind {
    SymPower {
        k: usize,
    },
    Atoms(AtomRule),
    Elems(ElemRule),
    DetTwist {
        inner: GModule,
        m: i64,
    },
    Frobenius {
        inner: GModule,
        i: u32,
    },
    TransposeDual(GModule),
    Dual(GModule),
    Tensor(GModule, GModule),
    DirectSum(GModule, GModule),
    Sub {
        inner: GModule,
        basis: MatrixF,
        pivots: Vec<usize>,
    },
    Quotient {
        inner: GModule,
        complement: MatrixF,
        projection: MatrixF,
    },
}

/// A finite-dimensional representation with a labeled basis.
#[derive(Clone)]
pub struct GModule {
    kind: Arc<Kind>,
    dim: usize,
    labels: Arc<Vec<String>>,
    groups: Vec<Group>,
    level: Level,
    name: String,
    tower: FieldTower,
}

impl fmt::Debug for GModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GModule({}, dim {}, {:?})",
            self.name, self.dim, self.groups
        )
    }
}

fn intersect(a: &[Group], b: &[Group]) -> Vec<Group> {
    a.iter().copied().filter(|g| b.contains(g)).collect()
}

pub fn monomial_label(i: usize, k: usize) -> String {
    format!("X^{i}Y^{}", k - i)
}

impl GModule {
    /// `Sym^k` of the standard representation, basis `X^i Y^(k-i)` with `i`
    /// descending from `k` to `0`.
    pub fn sym_power(t: &FieldTower, k: i64, level: Level) -> Result<GModule> {
        if k < 0 {
            return Err(Error::OutOfRange(format!("symmetric power of degree {k}")));
        }
        let k = k as usize;
        let groups = match level {
            Level::Base => vec![Group::SL2, Group::GL2],
            Level::Quadratic => vec![Group::SL2, Group::GL2, Group::U2],
        };
        Ok(GModule {
            kind: Arc::new(Kind::SymPower { k }),
            dim: k + 1,
            labels: Arc::new((0..=k).rev().map(|i| monomial_label(i, k)).collect()),
            groups,
            level,
            name: format!("V{k}"),
            tower: t.clone(),
        })
    }

    /// Module given by matrices for the atoms of Bruhat words.
    pub fn from_atoms(
        t: &FieldTower,
        name: &str,
        labels: Vec<String>,
        groups: Vec<Group>,
        level: Level,
        rule: AtomRule,
    ) -> GModule {
        GModule {
            kind: Arc::new(Kind::Atoms(rule)),
            dim: labels.len(),
            labels: Arc::new(labels),
            groups,
            level,
            name: name.into(),
            tower: t.clone(),
        }
    }

    /// Module given by a closed formula on arbitrary group elements.
    pub fn from_elements(
        t: &FieldTower,
        name: &str,
        labels: Vec<String>,
        groups: Vec<Group>,
        level: Level,
        rule: ElemRule,
    ) -> GModule {
        GModule {
            kind: Arc::new(Kind::Elems(rule)),
            dim: labels.len(),
            labels: Arc::new(labels),
            groups,
            level,
            name: name.into(),
            tower: t.clone(),
        }
    }

    pub fn trivial(t: &FieldTower, level: Level) -> GModule {
        GModule::sym_power(t, 0, level).expect("degree zero")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn groups(&self) -> &[Group] {
        &self.groups
    }
    pub fn supports(&self, g: Group) -> bool {
        self.groups.contains(&g)
    }
    pub fn level(&self) -> Level {
        self.level
    }
    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn renamed(mut self, name: &str) -> GModule {
        self.name = name.into();
        self
    }

    /// Restricts the declared group set.
    pub fn restricted(mut self, groups: &[Group]) -> GModule {
        self.groups = intersect(&self.groups, groups);
        self
    }

    fn derived(
        &self,
        kind: Kind,
        dim: usize,
        labels: Vec<String>,
        groups: Vec<Group>,
        name: String,
    ) -> GModule {
        GModule {
            kind: Arc::new(kind),
            dim,
            labels: Arc::new(labels),
            groups,
            level: self.level,
            name,
            tower: self.tower.clone(),
        }
    }

    /// `det^m ⊗ M`.
    pub fn det_twist(&self, m: i64) -> GModule {
        if m == 0 {
            return self.clone();
        }
        self.derived(
            Kind::DetTwist {
                inner: self.clone(),
                m,
            },
            self.dim,
            self.labels.to_vec(),
            self.groups.clone(),
            format!("e^{m}*{}", self.name),
        )
    }

    /// Precomposition with the entrywise Frobenius `x -> x^(p^i)`.
    pub fn frobenius_twist(&self, i: u32) -> GModule {
        if i == 0 {
            return self.clone();
        }
        self.derived(
            Kind::Frobenius {
                inner: self.clone(),
                i,
            },
            self.dim,
            self.labels.to_vec(),
            intersect(&self.groups, &[Group::SL2, Group::GL2]),
            format!("Fr{i}({})", self.name),
        )
    }

    /// `g` acts as `(g^t)^-1` did.
    pub fn transpose_dual(&self) -> GModule {
        self.derived(
            Kind::TransposeDual(self.clone()),
            self.dim,
            self.labels.to_vec(),
            intersect(&self.groups, &[Group::SL2, Group::GL2]),
            format!("{}^t", self.name),
        )
    }

    /// Contragredient module on the dual basis.
    pub fn dual(&self) -> GModule {
        self.derived(
            Kind::Dual(self.clone()),
            self.dim,
            self.labels.iter().map(|l| format!("{l}*")).collect(),
            self.groups.clone(),
            format!("{}*", self.name),
        )
    }

    pub fn tensor(&self, other: &GModule) -> Result<GModule> {
        self.same_tower(other)?;
        let labels = self
            .labels
            .iter()
            .flat_map(|a| other.labels.iter().map(move |b| format!("{a}(x){b}")))
            .collect();
        Ok(self.derived(
            Kind::Tensor(self.clone(), other.clone()),
            self.dim * other.dim,
            labels,
            intersect(&self.groups, &other.groups),
            format!("{}(x){}", self.name, other.name),
        ))
    }

    pub fn direct_sum(&self, other: &GModule) -> Result<GModule> {
        self.same_tower(other)?;
        let labels = self
            .labels
            .iter()
            .chain(other.labels.iter())
            .cloned()
            .collect();
        Ok(self.derived(
            Kind::DirectSum(self.clone(), other.clone()),
            self.dim + other.dim,
            labels,
            intersect(&self.groups, &other.groups),
            format!("{}+{}", self.name, other.name),
        ))
    }

    fn same_tower(&self, other: &GModule) -> Result<()> {
        if self.tower != other.tower {
            return Err(Error::FieldMismatch(format!(
                "{} and {} live over different fields",
                self.name, other.name
            )));
        }
        Ok(())
    }

    pub(crate) fn submodule_unchecked(
        &self,
        basis: MatrixF,
        pivots: Vec<usize>,
        name: String,
    ) -> GModule {
        let labels = (0..basis.cols()).map(|j| format!("b{j}")).collect();
        self.derived(
            Kind::Sub {
                inner: self.clone(),
                basis: basis.clone(),
                pivots,
            },
            basis.cols(),
            labels,
            self.groups.clone(),
            name,
        )
    }

    pub(crate) fn quotient_unchecked(
        &self,
        complement: MatrixF,
        projection: MatrixF,
        labels: Vec<String>,
        name: String,
    ) -> GModule {
        self.derived(
            Kind::Quotient {
                inner: self.clone(),
                complement: complement.clone(),
                projection,
            },
            complement.cols(),
            labels,
            self.groups.clone(),
            name,
        )
    }

    fn check_elem(&self, g: &GroupElem) -> Result<()> {
        if g.det(&self.tower).is_zero() {
            return Err(Error::Singular("action of a singular matrix".into()));
        }
        if self.groups.iter().any(|&grp| g.in_group(&self.tower, grp)) {
            Ok(())
        } else {
            Err(Error::UnsupportedGroup {
                group: format!("{:?}", g.m),
                module: self.name.clone(),
            })
        }
    }

    /// Matrix of `g` on the basis; columns are images of basis vectors.
    pub fn action_matrix(&self, g: &GroupElem) -> Result<MatrixF> {
        self.check_elem(g)?;
        self.act(g, false)
    }

    /// Same as [`GModule::action_matrix`] but through a second Bruhat word
    /// wherever atoms are involved.
    pub fn action_matrix_alt(&self, g: &GroupElem) -> Result<MatrixF> {
        self.check_elem(g)?;
        self.act(g, true)
    }

    /// Matrix of a single atom.
    pub fn atom_matrix(&self, a: &Atom) -> Result<MatrixF> {
        match &*self.kind {
            Kind::Atoms(rule) => rule(a),
            _ => self.act(&a.elem(&self.tower), false),
        }
    }

    fn word(&self, g: &GroupElem, alt: bool) -> Result<GenWord> {
        let t = &self.tower;
        let base_ok = g.is_base(t)
            && (self.supports(Group::GL2) || (self.supports(Group::SL2) && g.det(t) == Fe::ONE));
        if base_ok {
            if alt {
                alternative_word(g, t)
            } else {
                bruhat_decompose(g, t)
            }
        } else if self.supports(Group::U2) {
            unitary_word(g, t, alt)
        } else {
            Err(Error::UnsupportedGroup {
                group: format!("{:?}", g.m),
                module: self.name.clone(),
            })
        }
    }

    fn act(&self, g: &GroupElem, alt: bool) -> Result<MatrixF> {
        let t: &TowerData = &self.tower;
        Ok(match &*self.kind {
            Kind::SymPower { k } => sym_power_matrix(t, *k, g),
            Kind::Atoms(rule) => {
                let mut m = MatrixF::identity(self.dim);
                for a in self.word(g, alt)? {
                    m = m.mul(&rule(&a)?, t);
                }
                m
            }
            Kind::Elems(rule) => rule(g),
            Kind::DetTwist { inner, m } => {
                let d = t.pow(g.det(t), *m);
                inner.act(g, alt)?.scale(d, t)
            }
            Kind::Frobenius { inner, i } => inner.act(&g.map(|x| t.frob(x, *i)), alt)?,
            Kind::TransposeDual(inner) => inner.act(&g.transpose().inv(t)?, alt)?,
            Kind::Dual(inner) => inner.act(&g.inv(t)?, alt)?.transpose(),
            Kind::Tensor(a, b) => a.act(g, alt)?.kron(&b.act(g, alt)?, t),
            Kind::DirectSum(a, b) => {
                let (ma, mb) = (a.act(g, alt)?, b.act(g, alt)?);
                let n = a.dim;
                MatrixF::from_fn(self.dim, self.dim, |i, j| match (i < n, j < n) {
                    (true, true) => ma.get(i, j),
                    (false, false) => mb.get(i - n, j - n),
                    _ => Fe::ZERO,
                })
            }
            Kind::Sub {
                inner,
                basis,
                pivots,
            } => inner.act(g, alt)?.mul(basis, t).select_rows(pivots),
            Kind::Quotient {
                inner,
                complement,
                projection,
            } => projection.mul(&inner.act(g, alt)?, t).mul(complement, t),
        })
    }
}

/// `g . X^i Y^(k-i) = (aX + cY)^i (bX + dY)^(k-i)` in the descending basis.
fn sym_power_matrix(t: &TowerData, k: usize, g: &GroupElem) -> MatrixF {
    let lin_pow = |x: Fe, y: Fe, e: usize| -> Vec<Fe> {
        // coefficients of X^j Y^(e-j), j = 0..=e
        (0..=e)
            .map(|j| {
                let c = t.from_int(binomial_mod(e as i64, j as i64, t.p()) as i64);
                t.mul(c, t.mul(t.pow(x, j as i64), t.pow(y, (e - j) as i64)))
            })
            .collect()
    };
    let mut m = MatrixF::zeros(k + 1, k + 1);
    for i in 0..=k {
        let u = lin_pow(g.a(), g.c(), i);
        let v = lin_pow(g.b(), g.d(), k - i);
        let col = k - i;
        for (j1, &c1) in u.iter().enumerate() {
            if c1.is_zero() {
                continue;
            }
            for (j2, &c2) in v.iter().enumerate() {
                let row = k - (j1 + j2);
                let cur = m.get(row, col);
                m.set(row, col, t.add(cur, t.mul(c1, c2)));
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_tower::build_tower;

    #[test]
    fn trivial_module() {
        let t = build_tower(5, 1).unwrap();
        let v0 = GModule::sym_power(&t, 0, Level::Base).unwrap();
        let g = GroupElem::new(t.from_int(2), t.from_int(1), t.from_int(3), t.from_int(1));
        assert_eq!(v0.action_matrix(&g).unwrap(), MatrixF::identity(1));
        assert!(GModule::sym_power(&t, -1, Level::Base).is_err());
    }

    #[test]
    fn diagonal_eigenvalues() {
        let t = build_tower(7, 1).unwrap();
        let (a, d) = (t.from_int(3), t.from_int(5));
        let v = GModule::sym_power(&t, 4, Level::Base).unwrap();
        let m = v.action_matrix(&GroupElem::diag(a, d)).unwrap();
        for (row, i) in (0..=4).rev().enumerate() {
            assert_eq!(m.get(row, row), t.mul(t.pow(a, i), t.pow(d, 4 - i)));
        }
    }

    #[test]
    fn weyl_on_v1() {
        let t = build_tower(5, 1).unwrap();
        let v1 = GModule::sym_power(&t, 1, Level::Base).unwrap();
        let m = v1.action_matrix(&GroupElem::weyl(&t)).unwrap();
        // X -> -Y, Y -> X
        let minus = t.neg(Fe::ONE);
        assert_eq!(
            m,
            MatrixF::from_rows(&[vec![Fe::ZERO, Fe::ONE], vec![minus, Fe::ZERO]])
        );
    }

    #[test]
    fn twist_and_dual_of_trivial() {
        let t = build_tower(5, 1).unwrap();
        let v0 = GModule::trivial(&t, Level::Base);
        let e = v0.det_twist(1);
        let g = GroupElem::diag(t.from_int(2), t.from_int(4));
        assert_eq!(
            e.action_matrix(&g).unwrap(),
            MatrixF::scalar(1, t.from_int(3))
        );
        assert_eq!(v0.dual().action_matrix(&g).unwrap(), MatrixF::identity(1));
    }

    #[test]
    fn unitary_needs_quadratic_level() {
        let t = build_tower(5, 1).unwrap();
        let g = GroupElem::unitary_torus(&t, t.gen());
        let base = GModule::sym_power(&t, 2, Level::Base).unwrap();
        assert!(base.action_matrix(&g).is_err());
        let quad = GModule::sym_power(&t, 2, Level::Quadratic).unwrap();
        assert!(quad.action_matrix(&g).is_ok());
    }
}
