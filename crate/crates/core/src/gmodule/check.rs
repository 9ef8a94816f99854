//! Relation checks for generator-defined representations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{random_elem, Atom, GModule, Group, GroupElem};
use crate::error::Result;
use crate::field_tower::{Fe, TowerData};
use crate::linalg::MatrixF;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepCheck {
    pub passed: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

struct Checker<'a> {
    m: &'a GModule,
    t: &'a TowerData,
    checked: usize,
}

impl Checker<'_> {
    fn atom(&self, a: Atom) -> Result<MatrixF> {
        self.m.atom_matrix(&a)
    }

    fn expect_eq(
        &mut self,
        lhs: MatrixF,
        rhs: MatrixF,
        what: impl FnOnce() -> String,
    ) -> Option<String> {
        self.checked += 1;
        (lhs != rhs).then(what)
    }

    fn torus(&self, group: Group) -> Vec<(Fe, Fe)> {
        let t = self.t;
        match group {
            Group::GL2 => t
                .base_units()
                .flat_map(|x| t.base_units().map(move |y| (x, y)))
                .collect(),
            Group::SL2 => t.base_units().map(|x| (x, t.inv(x))).collect(),
            Group::U2 => t
                .all_units()
                .map(|x| (x, t.pow(x, -(t.q() as i64))))
                .collect(),
        }
    }

    fn relations(&mut self, group: Group) -> Result<Option<String>> {
        let t = self.t;
        let base: Vec<Fe> = t.base_elements().to_vec();
        for &a in &base {
            for &b in &base {
                let lhs = self
                    .atom(Atom::Lower(a))?
                    .mul(&self.atom(Atom::Lower(b))?, t);
                let rhs = self.atom(Atom::Lower(t.add(a, b)))?;
                if let Some(w) =
                    self.expect_eq(lhs, rhs, || format!("u({})u({}) != u(a+b)", a.0, b.0))
                {
                    return Ok(Some(w));
                }
            }
        }
        let torus = self.torus(group);
        let mul_pairs: Vec<_> = if torus.len() <= 64 {
            torus
                .iter()
                .flat_map(|&x| torus.iter().map(move |&y| (x, y)))
                .collect()
        } else {
            let gen = torus[1 % torus.len()];
            torus.iter().map(|&x| (x, gen)).collect()
        };
        for ((x1, x2), (y1, y2)) in mul_pairs {
            let lhs = self
                .atom(Atom::Diag(x1, x2))?
                .mul(&self.atom(Atom::Diag(y1, y2))?, t);
            let rhs = self.atom(Atom::Diag(t.mul(x1, y1), t.mul(x2, y2)))?;
            if let Some(w) = self.expect_eq(lhs, rhs, || {
                format!(
                    "diag({},{}) diag({},{}) not multiplicative",
                    x1.0, x2.0, y1.0, y2.0
                )
            }) {
                return Ok(Some(w));
            }
        }
        let w = self.atom(Atom::Weyl)?;
        let minus = t.neg(Fe::ONE);
        if let Some(wit) =
            self.expect_eq(w.mul(&w, t), self.atom(Atom::Diag(minus, minus))?, || {
                "weyl^2 != diag(-1,-1)".into()
            })
        {
            return Ok(Some(wit));
        }
        for &(x1, x2) in &torus {
            let d = self.atom(Atom::Diag(x1, x2))?;
            let dinv = self.atom(Atom::Diag(t.inv(x1), t.inv(x2)))?;
            for &a in &base {
                let lhs = d.mul(&self.atom(Atom::Lower(a))?, t).mul(&dinv, t);
                let rhs = self.atom(Atom::Lower(t.mul(a, t.div(x2, x1))))?;
                if let Some(w) = self.expect_eq(lhs, rhs, || {
                    format!("diag({},{}) u({}) diag^-1 != u(a x2/x1)", x1.0, x2.0, a.0)
                }) {
                    return Ok(Some(w));
                }
            }
        }
        Ok(None)
    }

    fn products(
        &mut self,
        group: Group,
        rng: &mut ChaCha8Rng,
        samples: usize,
    ) -> Result<Option<String>> {
        let t = self.t;
        for _ in 0..samples {
            let g = random_elem(t, group, rng);
            let h = random_elem(t, group, rng);
            let gh = g.mul(&h, t);
            let lhs = self.m.action_matrix(&g)?.mul(&self.m.action_matrix(&h)?, t);
            let rhs = self.m.action_matrix(&gh)?;
            if let Some(w) = self.expect_eq(lhs, rhs, || {
                format!(
                    "rho(g)rho(h) != rho(gh) for g = {}, h = {}",
                    show(&g),
                    show(&h)
                )
            }) {
                return Ok(Some(w));
            }
            let alt = self.m.action_matrix_alt(&g)?;
            if let Some(w) = self.expect_eq(self.m.action_matrix(&g)?, alt, || {
                format!("two words for {} disagree", show(&g))
            }) {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }
}

fn show(g: &GroupElem) -> String {
    format!("{:?}", g.m.map(|r| r.map(|x| x.0)))
}

/// Checks the defining relations of every declared group on the atom
/// matrices, then `samples` random product and well-definedness identities.
pub fn check_representation(m: &GModule, seed: u64, samples: usize) -> Result<RepCheck> {
    let t = m.tower();
    let mut c = Checker { m, t, checked: 0 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &group in m.groups() {
        if let Some(w) = c.relations(group)? {
            return Ok(RepCheck {
                passed: false,
                checked: c.checked,
                witness: Some(format!("{group}: {w}")),
            });
        }
        if let Some(w) = c.products(group, &mut rng, samples)? {
            return Ok(RepCheck {
                passed: false,
                checked: c.checked,
                witness: Some(format!("{group}: {w}")),
            });
        }
    }
    Ok(RepCheck {
        passed: true,
        checked: c.checked,
        witness: None,
    })
}
