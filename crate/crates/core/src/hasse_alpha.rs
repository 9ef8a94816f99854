//! Coefficient-level pieces of the weight-raising map: an explicit coset
//! transversal, its bijection with `P^1(F_p)`, the induced module split into
//! constants and `V_(p-1) ⊗ V_k`, and polynomial multiplication into `V_(k+p-1)`.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field_tower::{gcd, is_prime, Fe, FieldTower, TowerData};
use crate::gmodule::{p1_index, EquivMap, GModule, Group, GroupElem, Level};
use crate::linalg::MatrixF;
use crate::serre_maps::{permutation_module, vartheta_map, PolyMap};

pub type IntMatrix = [[i64; 2]; 2];

/// Left coset representatives of the level-`p` subgroup, `A N + B p = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transversal {
    pub n: i64,
    pub p: i64,
    pub a: i64,
    pub b: i64,
    pub mats: Vec<IntMatrix>,
}

pub fn int_det(m: &IntMatrix) -> i64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn int_mul(x: &IntMatrix, y: &IntMatrix) -> IntMatrix {
    let mut r = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    r
}

/// Inverse of a determinant-one integer matrix.
fn int_inv(m: &IntMatrix) -> IntMatrix {
    [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]
}

pub fn build_transversal(n: i64, p: i64) -> Result<Transversal> {
    if p <= 3 || !is_prime(p as u64) {
        return Err(Error::OutOfRange(format!("need a prime p > 3, got {p}")));
    }
    if n < 5 {
        return Err(Error::OutOfRange(format!("need N >= 5, got {n}")));
    }
    if gcd(n as u64, p as u64) != 1 {
        return Err(Error::OutOfRange(format!("gcd({n}, {p}) != 1")));
    }
    let (g, x, _) = extended_gcd(n, p);
    debug_assert_eq!(g, 1);
    let a = x.rem_euclid(p);
    let b = (1 - a * n) / p;
    let mut mats: Vec<IntMatrix> = (1..=p).map(|i| [[1, 0], [n * (i - 1), 1]]).collect();
    mats.push([[b * p, -1], [a * n, 1]]);
    Ok(Transversal { n, p, a, b, mats })
}

fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = extended_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

impl Transversal {
    pub fn determinants(&self) -> Vec<i64> {
        self.mats.iter().map(int_det).collect()
    }

    /// Index `j` with `g x_i` in `x_j Gamma_0`, i.e. the lower-left entry of
    /// `x_j^-1 g x_i` vanishes mod `p`.
    pub fn induced_permutation(&self, g: &IntMatrix) -> Result<Vec<usize>> {
        if int_det(g) != 1 {
            return Err(Error::OutOfRange(
                "the coset action needs determinant 1".into(),
            ));
        }
        (0..self.mats.len())
            .map(|i| {
                let gx = int_mul(g, &self.mats[i]);
                self.mats
                    .iter()
                    .position(|xj| int_mul(&int_inv(xj), &gx)[1][0].rem_euclid(self.p) == 0)
                    .ok_or_else(|| Error::Internal(format!("no coset contains g x_{}", i + 1)))
            })
            .collect()
    }
}

/// Normalized point of `P^1(F_p)`: `(1 : c)` or `(0 : 1)`.
pub type P1Point = (i64, i64);

fn normalize(p: i64, v: (i64, i64)) -> P1Point {
    let (x, y) = (v.0.rem_euclid(p), v.1.rem_euclid(p));
    if x == 0 {
        (0, 1)
    } else {
        let inv = mod_inv(x, p);
        (1, (y * inv).rem_euclid(p))
    }
}

fn mod_inv(x: i64, p: i64) -> i64 {
    extended_gcd(x.rem_euclid(p), p).1.rem_euclid(p)
}

/// Cosets go to the first column of their representative, mod `p`.
pub fn coset_to_p1(tr: &Transversal) -> Result<Vec<P1Point>> {
    let pts: Vec<P1Point> = tr
        .mats
        .iter()
        .map(|m| normalize(tr.p, (m[0][0], m[1][0])))
        .collect();
    let distinct: HashSet<_> = pts.iter().collect();
    if distinct.len() != pts.len() || pts.len() as i64 != tr.p + 1 {
        return Err(Error::Internal(
            "coset table is not a bijection onto P^1".into(),
        ));
    }
    Ok(pts)
}

/// Fractional-linear action on normalized points.
pub fn act_on_p1(p: i64, g: &IntMatrix, v: P1Point) -> P1Point {
    normalize(
        p,
        (g[0][0] * v.0 + g[0][1] * v.1, g[1][0] * v.0 + g[1][1] * v.1),
    )
}

fn reduce(t: &TowerData, m: &IntMatrix) -> GroupElem {
    GroupElem::new(
        t.from_int(m[0][0]),
        t.from_int(m[0][1]),
        t.from_int(m[1][0]),
        t.from_int(m[1][1]),
    )
}

fn require_prime_field(t: &TowerData) -> Result<()> {
    if t.n() != 1 {
        return Err(Error::OutOfRange(format!("needs q = p, got q = {}", t.q())));
    }
    Ok(())
}

/// `F_p[P^1] ⊗ V_k` with the map from the induced module and its two
/// equivariant projections.
#[derive(Clone, Debug)]
pub struct InducedDecomposition {
    pub k: i64,
    /// Functions on the cosets with values in `V_k`, one block per `x_i`.
    pub induced: GModule,
    pub tensor: GModule,
    /// `f -> sum_i x_i Gamma_0 ⊗ x_i f(x_i Gamma_0)`.
    pub b: EquivMap,
    /// Augmentation tensor identity, onto `V_k`.
    pub to_constants: PolyMap,
    /// `vartheta ⊗ id`, onto `V_(p-1) ⊗ V_k`.
    pub to_steinberg: PolyMap,
}

impl InducedDecomposition {
    /// Both projections stacked; invertible when the splitting holds.
    pub fn splitting_matrix(&self) -> MatrixF {
        self.to_constants.matrix.vstack(&self.to_steinberg.matrix)
    }
}

pub fn induced_decomposition(
    t: &FieldTower,
    tr: &Transversal,
    k: i64,
) -> Result<InducedDecomposition> {
    require_prime_field(t)?;
    let p = t.p() as i64;
    if tr.p != p {
        return Err(Error::FieldMismatch(format!(
            "transversal for p = {}, field has p = {p}",
            tr.p
        )));
    }
    if !(0..=p - 1).contains(&k) {
        return Err(Error::OutOfRange(format!("need 0 <= k <= p-1, got {k}")));
    }
    let vk = GModule::sym_power(t, k, Level::Base)?;
    let d = vk.dim();
    let perm = permutation_module(t);
    let tensor = perm.tensor(&vk)?;
    let reps: Vec<GroupElem> = tr.mats.iter().map(|m| reduce(t, m)).collect();
    let n = reps.len();

    let (tt, rr, vv) = (t.clone(), reps.clone(), vk.clone());
    let rule = Arc::new(move |g: &GroupElem| {
        let ginv = g.inv(&tt).expect("group element");
        let mut m = MatrixF::zeros(n * d, n * d);
        for i in 0..n {
            let h = ginv.mul(&rr[i], &tt);
            let (j, b0) = rr
                .iter()
                .enumerate()
                .find_map(|(j, xj)| {
                    let b0 = xj.inv(&tt).expect("unit").mul(&h, &tt);
                    b0.c().is_zero().then_some((j, b0))
                })
                .expect("cosets cover the group");
            // (g f)(x_i) = b0^-1 f(x_j)
            let blk = vv
                .action_matrix(&b0.inv(&tt).expect("unit"))
                .expect("symmetric power action");
            for r in 0..d {
                for c in 0..d {
                    m.set(i * d + r, j * d + c, blk.get(r, c));
                }
            }
        }
        m
    });
    let labels = (1..=n)
        .flat_map(|i| vk.labels().iter().map(move |l| format!("x{i}:{l}")))
        .collect();
    let induced = GModule::from_elements(
        t,
        &format!("Ind(V{k})"),
        labels,
        vec![Group::SL2],
        Level::Base,
        rule,
    );

    let mut bm = MatrixF::zeros(n * d, n * d);
    for (i, x) in reps.iter().enumerate() {
        let (pos, _) = p1_index(t, (x.a(), x.c()));
        let blk = vk.action_matrix(x)?;
        for r in 0..d {
            for c in 0..d {
                bm.set(pos * d + r, i * d + c, blk.get(r, c));
            }
        }
    }
    let b = EquivMap::new("b", &induced, &tensor, bm);

    let aug = MatrixF::from_fn(1, perm.dim(), |_, _| Fe::ONE);
    let to_constants = PolyMap::new(
        "augmentation",
        &tensor,
        &vk,
        aug.kron(&MatrixF::identity(d), t),
    );
    let vt = vartheta_map(t)?;
    let st = vt.target.tensor(&vk)?;
    let to_steinberg = PolyMap::new(
        "vartheta(x)id",
        &tensor,
        &st,
        vt.matrix.kron(&MatrixF::identity(d), t),
    );
    Ok(InducedDecomposition {
        k,
        induced,
        tensor,
        b,
        to_constants,
        to_steinberg,
    })
}

/// Multiplication `V_(p-1) ⊗ V_k -> V_(k+p-1)` on monomial bases.
pub fn alpha_coefficient_map(t: &FieldTower, k: i64) -> Result<PolyMap> {
    require_prime_field(t)?;
    let p = t.p() as i64;
    if !(0..=p - 1).contains(&k) {
        return Err(Error::OutOfRange(format!("need 0 <= k <= p-1, got {k}")));
    }
    let st = GModule::sym_power(t, p - 1, Level::Base)?;
    let vk = GModule::sym_power(t, k, Level::Base)?;
    let src = st.tensor(&vk)?;
    let dst = GModule::sym_power(t, k + p - 1, Level::Base)?;
    let d = vk.dim();
    // Y-degrees add
    let m = MatrixF::from_fn(dst.dim(), src.dim(), |r, c| {
        if c / d + c % d == r {
            Fe::ONE
        } else {
            Fe::ZERO
        }
    });
    Ok(PolyMap::new("multiply", &src, &dst, m))
}

/// Projection to the `V_(p-1) ⊗ V_k` component followed by multiplication.
pub fn alpha_composite(dec: &InducedDecomposition, mult: &PolyMap) -> PolyMap {
    let t = dec.tensor.tower();
    PolyMap::new(
        "multiply.vartheta",
        &dec.tensor,
        &mult.target,
        mult.matrix.mul(&dec.to_steinberg.matrix, t),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_tower::build_tower;

    #[test]
    fn transversal_example() {
        let tr = build_transversal(5, 7).unwrap();
        assert_eq!((tr.a, tr.b), (3, -2));
        assert_eq!(tr.mats[7], [[-14, -1], [15, 1]]);
        assert_eq!(tr.mats[0], [[1, 0], [0, 1]]);
        assert!(tr.determinants().iter().all(|&d| d == 1));
        assert!(build_transversal(7, 7).is_err());
        assert!(build_transversal(4, 7).is_err());
        assert!(build_transversal(5, 3).is_err());
    }

    #[test]
    fn cosets_and_permutation() {
        let tr = build_transversal(5, 7).unwrap();
        let pts = coset_to_p1(&tr).unwrap();
        assert_eq!(pts[0], (1, 0));
        assert_eq!(pts[7], (0, 1));
        for i in 0..7 {
            assert_eq!(pts[i], (1, (5 * i as i64) % 7));
        }
        for g in [[[1, 1], [0, 1]], [[0, -1], [1, 0]], [[2, 3], [5, 8]]] {
            let perm = tr.induced_permutation(&g).unwrap();
            for (i, &j) in perm.iter().enumerate() {
                assert_eq!(act_on_p1(7, &g, pts[i]), pts[j]);
            }
        }
    }

    #[test]
    fn induced_splitting_p5() {
        let t = build_tower(5, 1).unwrap();
        let tr = build_transversal(11, 5).unwrap();
        for k in 0..=4 {
            let dec = induced_decomposition(&t, &tr, k).unwrap();
            assert_eq!(dec.tensor.dim(), 6 * (k as usize + 1));
            dec.b.check(Group::SL2).unwrap();
            assert!(dec.b.matrix.is_invertible(&t));
            for g in [Group::SL2, Group::GL2] {
                dec.to_constants.check(g).unwrap();
                dec.to_steinberg.check(g).unwrap();
            }
            assert!(dec.splitting_matrix().is_invertible(&t));
        }
    }

    #[test]
    fn multiplication_rank() {
        let t = build_tower(5, 1).unwrap();
        for k in 0..=4 {
            let m = alpha_coefficient_map(&t, k).unwrap();
            assert_eq!(m.rank(), (k + 5) as usize);
            m.check(Group::GL2).unwrap();
        }
        let dec = induced_decomposition(&t, &build_transversal(6, 5).unwrap(), 0).unwrap();
        let comp = alpha_composite(&dec, &alpha_coefficient_map(&t, 0).unwrap());
        assert_eq!(comp.rank(), 5);
        comp.check(Group::GL2).unwrap();
    }
}
