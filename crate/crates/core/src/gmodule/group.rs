//! 2x2 group elements, Bruhat words and the generator sets of the three groups.

use std::fmt;

use rand::RngExt;

use crate::error::{Error, Result};
use crate::field_tower::{Fe, TowerData};

/// `SL_2(F_q)`, `GL_2(F_q)` or the unitary group `U_2 = F_{q^2}^x . SL_2(F_q)`
/// with the torus embedded as `t -> diag(t, t^-q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    SL2,
    GL2,
    U2,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::SL2 => "SL2",
            Group::GL2 => "GL2",
            Group::U2 => "U2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElem {
    pub m: [[Fe; 2]; 2],
}

impl GroupElem {
    pub fn new(a: Fe, b: Fe, c: Fe, d: Fe) -> GroupElem {
        GroupElem {
            m: [[a, b], [c, d]],
        }
    }
    pub fn identity() -> GroupElem {
        GroupElem::new(Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ONE)
    }
    pub fn weyl(t: &TowerData) -> GroupElem {
        GroupElem::new(Fe::ZERO, Fe::ONE, t.neg(Fe::ONE), Fe::ZERO)
    }
    pub fn lower(u: Fe) -> GroupElem {
        GroupElem::new(Fe::ONE, Fe::ZERO, u, Fe::ONE)
    }
    pub fn diag(x1: Fe, x2: Fe) -> GroupElem {
        GroupElem::new(x1, Fe::ZERO, Fe::ZERO, x2)
    }
    /// `diag(t, t^-q)`.
    pub fn unitary_torus(t: &TowerData, x: Fe) -> GroupElem {
        GroupElem::diag(x, t.pow(x, -(t.q() as i64)))
    }

    pub fn a(&self) -> Fe {
        self.m[0][0]
    }
    pub fn b(&self) -> Fe {
        self.m[0][1]
    }
    pub fn c(&self) -> Fe {
        self.m[1][0]
    }
    pub fn d(&self) -> Fe {
        self.m[1][1]
    }

    pub fn det(&self, t: &TowerData) -> Fe {
        t.sub(t.mul(self.a(), self.d()), t.mul(self.b(), self.c()))
    }

    pub fn mul(&self, o: &GroupElem, t: &TowerData) -> GroupElem {
        let e = |i: usize, j: usize| {
            t.add(
                t.mul(self.m[i][0], o.m[0][j]),
                t.mul(self.m[i][1], o.m[1][j]),
            )
        };
        GroupElem::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn inv(&self, t: &TowerData) -> Result<GroupElem> {
        let det = self.det(t);
        if det.is_zero() {
            return Err(Error::Singular("group element".into()));
        }
        let di = t.inv(det);
        Ok(GroupElem::new(
            t.mul(self.d(), di),
            t.neg(t.mul(self.b(), di)),
            t.neg(t.mul(self.c(), di)),
            t.mul(self.a(), di),
        ))
    }

    pub fn transpose(&self) -> GroupElem {
        GroupElem::new(self.a(), self.c(), self.b(), self.d())
    }

    pub fn map(&self, f: impl Fn(Fe) -> Fe) -> GroupElem {
        GroupElem::new(f(self.a()), f(self.b()), f(self.c()), f(self.d()))
    }

    /// Applies the matrix to a column vector.
    pub fn act(&self, v: (Fe, Fe), t: &TowerData) -> (Fe, Fe) {
        (
            t.add(t.mul(self.a(), v.0), t.mul(self.b(), v.1)),
            t.add(t.mul(self.c(), v.0), t.mul(self.d(), v.1)),
        )
    }

    pub fn is_base(&self, t: &TowerData) -> bool {
        self.m.iter().flatten().all(|&x| t.in_base(x))
    }

    pub fn in_group(&self, t: &TowerData, g: Group) -> bool {
        match g {
            Group::SL2 => self.is_base(t) && self.det(t) == Fe::ONE,
            Group::GL2 => self.is_base(t) && !self.det(t).is_zero(),
            Group::U2 => unitary_split(t, self).is_some(),
        }
    }

    pub fn render(&self, t: &TowerData) -> Vec<Vec<Vec<u32>>> {
        self.m
            .iter()
            .map(|r| r.iter().map(|&x| t.coeffs(x)).collect())
            .collect()
    }
}

/// Generator atoms of Bruhat words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Diag(Fe, Fe),
    Lower(Fe),
    Weyl,
}

impl Atom {
    pub fn elem(&self, t: &TowerData) -> GroupElem {
        match *self {
            Atom::Diag(x1, x2) => GroupElem::diag(x1, x2),
            Atom::Lower(u) => GroupElem::lower(u),
            Atom::Weyl => GroupElem::weyl(t),
        }
    }
}

pub type GenWord = Vec<Atom>;

pub fn word_product(word: &[Atom], t: &TowerData) -> GroupElem {
    word.iter()
        .fold(GroupElem::identity(), |acc, a| acc.mul(&a.elem(t), t))
}

/// Factors `g` as `lower . weyl . diag . lower` (or `diag . lower` when the
/// upper-right entry vanishes); identity atoms are dropped.
pub fn bruhat_decompose(g: &GroupElem, t: &TowerData) -> Result<GenWord> {
    let det = g.det(t);
    if det.is_zero() {
        return Err(Error::Singular("cannot factor a singular matrix".into()));
    }
    let mut w = Vec::new();
    if g.b().is_zero() {
        push_diag(&mut w, g.a(), g.d());
        push_lower(&mut w, t.div(g.c(), g.d()));
    } else {
        let b = g.b();
        push_lower(&mut w, t.div(g.d(), b));
        w.push(Atom::Weyl);
        push_diag(&mut w, t.div(det, b), b);
        push_lower(&mut w, t.div(g.a(), b));
    }
    Ok(w)
}

/// A second factorization of `g`, through `g . weyl^-1` followed by `weyl`.
pub fn alternative_word(g: &GroupElem, t: &TowerData) -> Result<GenWord> {
    let winv = GroupElem::weyl(t).inv(t)?;
    let mut w = bruhat_decompose(&g.mul(&winv, t), t)?;
    w.push(Atom::Weyl);
    Ok(w)
}

fn push_diag(w: &mut GenWord, x1: Fe, x2: Fe) {
    if x1 != Fe::ONE || x2 != Fe::ONE {
        w.push(Atom::Diag(x1, x2));
    }
}
fn push_lower(w: &mut GenWord, u: Fe) {
    if !u.is_zero() {
        w.push(Atom::Lower(u));
    }
}

/// All `x` with `diag(x, x^-q)^-1 . g` in `SL_2(F_q)`, paired with that quotient.
fn unitary_splits(t: &TowerData, g: &GroupElem) -> Vec<(Fe, GroupElem)> {
    let det = g.det(t);
    if det.is_zero() {
        return Vec::new();
    }
    t.all_units()
        .filter(|&x| t.pow(x, 1 - t.q() as i64) == det)
        .filter_map(|x| {
            let h = GroupElem::unitary_torus(t, x).inv(t).ok()?.mul(g, t);
            (h.is_base(t) && h.det(t) == Fe::ONE).then_some((x, h))
        })
        .collect()
}

fn unitary_split(t: &TowerData, g: &GroupElem) -> Option<(Fe, GroupElem)> {
    unitary_splits(t, g).into_iter().next()
}

/// Word `diag(x, x^-q)` followed by the Bruhat word of the `SL_2(F_q)` part;
/// `alternative` picks the last admissible `x` instead of the first.
pub fn unitary_word(g: &GroupElem, t: &TowerData, alternative: bool) -> Result<GenWord> {
    let splits = unitary_splits(t, g);
    let pick = if alternative {
        splits.last()
    } else {
        splits.first()
    };
    let Some(&(x, h)) = pick else {
        return Err(Error::UnsupportedGroup {
            group: "U2".into(),
            module: "element outside the unitary group".into(),
        });
    };
    let mut w = Vec::new();
    push_diag(&mut w, x, t.pow(x, -(t.q() as i64)));
    w.extend(bruhat_decompose(&h, t)?);
    Ok(w)
}

/// Fixed generating set of a group (see module docs for the choice).
pub fn generators(t: &TowerData, g: Group) -> Vec<GroupElem> {
    let mut gens = vec![GroupElem::weyl(t)];
    gens.extend(t.base_basis().into_iter().map(GroupElem::lower));
    let eps = t.eps();
    match g {
        Group::SL2 => gens.push(GroupElem::diag(eps, t.inv(eps))),
        Group::GL2 => {
            gens.push(GroupElem::diag(eps, t.inv(eps)));
            gens.push(GroupElem::diag(eps, Fe::ONE));
        }
        Group::U2 => gens.push(GroupElem::unitary_torus(t, t.gen())),
    }
    gens
}

fn random_base<R: rand::Rng>(t: &TowerData, rng: &mut R) -> Fe {
    let base = t.base_elements();
    base[rng.random_range(0..base.len())]
}

pub fn random_elem<R: rand::Rng>(t: &TowerData, g: Group, rng: &mut R) -> GroupElem {
    loop {
        let m = GroupElem::new(
            random_base(t, rng),
            random_base(t, rng),
            random_base(t, rng),
            random_base(t, rng),
        );
        let det = m.det(t);
        if det.is_zero() {
            continue;
        }
        return match g {
            Group::GL2 => m,
            Group::SL2 => GroupElem::new(t.div(m.a(), det), t.div(m.b(), det), m.c(), m.d()),
            Group::U2 => {
                let h = GroupElem::new(t.div(m.a(), det), t.div(m.b(), det), m.c(), m.d());
                let x = t.exp_g(rng.random_range(0..t.order() as i64));
                GroupElem::unitary_torus(t, x).mul(&h, t)
            }
        };
    }
}

/// Points of `P^1(F_q)` in the fixed order `[1:0]`, then `[a:1]` with `a` in
/// increasing encoding.
pub fn p1_points(t: &TowerData) -> Vec<(Fe, Fe)> {
    let mut pts = vec![(Fe::ONE, Fe::ZERO)];
    pts.extend(t.base_elements().iter().map(|&a| (a, Fe::ONE)));
    pts
}

/// Index of the point through a nonzero vector, and the scalar `l` with
/// `v = l * representative`.
pub fn p1_index(t: &TowerData, v: (Fe, Fe)) -> (usize, Fe) {
    if v.1.is_zero() {
        (0, v.0)
    } else {
        let a = t.div(v.0, v.1);
        let pos = t
            .base_elements()
            .binary_search(&a)
            .expect("point not rational over the base field");
        (pos + 1, v.1)
    }
}
