//! Worked examples recomputed by independent means: plain integer arithmetic
//! mod p, floating-point roots of unity, and brute-force search.

use num_traits::ToPrimitive;

use modrep::characters::{irreducible_inventory, pregular_classes, CharacterContext, ClassKind};
use modrep::field_tower::{build_tower, monic_irreducibles, Fe, TowerData};
use modrep::gmodule::{intertwiner_space, GModule, Group, GroupElem, Level};
use modrep::hasse_alpha::{alpha_coefficient_map, build_transversal};
use modrep::linalg::MatrixF;
use modrep::serre_maps::{d_image_basis, ker_d_graded, serre_d, vartheta_map};

/// Rank over F_p of an integer matrix, by plain Gaussian elimination.
fn rank_mod_p(mut m: Vec<Vec<i64>>, p: i64) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c].rem_euclid(p) != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = (1..p)
            .find(|x| (x * m[rank][c]).rem_euclid(p) == 1)
            .unwrap();
        for r in 0..m.len() {
            if r != rank && m[r][c].rem_euclid(p) != 0 {
                let f = (m[r][c] * inv).rem_euclid(p);
                for j in 0..cols {
                    m[r][j] = (m[r][j] - f * m[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn irreducible_quadratics_over_f5() {
    let p = 5;
    let brute = (0..p)
        .flat_map(|b| (0..p).map(move |c| (b, c)))
        .filter(|&(b, c)| (0..p).all(|x| (x * x + b * x + c) % p != 0))
        .count();
    assert_eq!(brute, 10);
    assert_eq!(monic_irreducibles(5, 2).len(), brute);
}

#[test]
fn generator_of_f9_has_order_8() {
    let t = build_tower(3, 1).unwrap();
    let g = t.gen();
    let mut x = g;
    let mut order = 1;
    while x != Fe::ONE {
        x = t.mul(x, g);
        order += 1;
    }
    assert_eq!(order, 8);
    assert_eq!(t.modulus().len(), 3);
}

fn brute_dlog(t: &TowerData, x: Fe) -> i64 {
    let mut y = Fe::ONE;
    for e in 0.. {
        if y == x {
            return e;
        }
        y = t.mul(y, t.gen());
    }
    unreachable!()
}

#[test]
fn teichmuller_products_q5() {
    let t = build_tower(5, 1).unwrap();
    let units: Vec<Fe> = t.all_units().collect();
    for i in 0..100 {
        let (a, b) = (units[(7 * i) % 24], units[(11 * i + 3) % 24]);
        let e = (brute_dlog(&t, a) + brute_dlog(&t, b)) % 24;
        assert_eq!(t.teichmuller(t.mul(a, b)).unwrap(), t.cyclo().root(e));
    }
}

#[test]
fn embedding_determinant_is_norm_q5() {
    let t = build_tower(5, 1).unwrap();
    for c in t.all_units() {
        let m = t.iota(c).unwrap();
        let det = t.sub(t.mul(m[0][0], m[1][1]), t.mul(m[0][1], m[1][0]));
        let norm = (0..6).fold(Fe::ONE, |acc, _| t.mul(acc, c));
        assert_eq!(det, norm);
    }
}

#[test]
fn schur_dimensions_q5() {
    let t = build_tower(5, 1).unwrap();
    for k in 0..=4 {
        let v = GModule::sym_power(&t, k, Level::Base).unwrap();
        assert_eq!(
            intertwiner_space(&v, &v, Group::GL2).unwrap().len(),
            1,
            "k = {k}"
        );
    }
    let v0 = GModule::sym_power(&t, 0, Level::Base).unwrap();
    let v4 = GModule::sym_power(&t, 4, Level::Base).unwrap();
    assert!(intertwiner_space(&v0, &v4, Group::GL2).unwrap().is_empty());
}

/// `D(X^i Y^(m-i)) = i X^(i+q-1) Y^(m-i) + (m-i) X^i Y^(m-i+q-1)`, rows indexed by X-degree.
fn d_matrix(q: i64, m: i64) -> Vec<Vec<i64>> {
    let out = m + q - 1;
    let mut rows = vec![vec![0; (m + 1) as usize]; (out + 1) as usize];
    for i in 0..=m {
        rows[(i + q - 1) as usize][i as usize] += i;
        rows[i as usize][i as usize] += m - i;
    }
    rows
}

#[test]
fn small_kernels_of_derivation_q3() {
    let t = build_tower(3, 1).unwrap();
    for (m, expect) in [(3, 2), (4, 1)] {
        let nullity = m as usize + 1 - rank_mod_p(d_matrix(3, m), 3);
        assert_eq!(nullity, expect);
        assert_eq!(ker_d_graded(&t, m as usize).unwrap().0, expect);
    }
    for m in 0..=30 {
        let nullity = m as usize + 1 - rank_mod_p(d_matrix(5, m), 5);
        let t5 = build_tower(5, 1).unwrap();
        assert_eq!(ker_d_graded(&t5, m as usize).unwrap().0, nullity, "m = {m}");
    }
}

#[test]
fn steinberg_map_rank_prime_fields() {
    for p in [3i64, 5, 7] {
        // column of the point (a : 1) is (aX + Y)^(p-1); of (1 : 0) is X^(p-1)
        let mut cols: Vec<Vec<i64>> = vec![{
            let mut c = vec![0; p as usize];
            c[0] = 1;
            c
        }];
        for a in 0..p {
            cols.push(
                (0..p)
                    .map(|j| {
                        let xdeg = p - 1 - j;
                        binom(p - 1, xdeg) * (0..xdeg).fold(1, |acc, _| acc * a % p) % p
                    })
                    .collect(),
            );
        }
        let rows: Vec<Vec<i64>> = (0..p as usize)
            .map(|r| cols.iter().map(|c| c[r]).collect())
            .collect();
        assert_eq!(rank_mod_p(rows, p), p as usize);
        let t = build_tower(p as u32, 1).unwrap();
        assert_eq!(vartheta_map(&t).unwrap().rank(), p as usize);
    }
    let t9 = build_tower(3, 2).unwrap();
    assert_eq!(vartheta_map(&t9).unwrap().rank(), 9);
}

#[test]
fn derivation_image_basis_q7() {
    let t = build_tower(7, 1).unwrap();
    for k in 2..=6usize {
        let d = serre_d(&t, k as i64, Level::Base).unwrap();
        let basis: Vec<Vec<Fe>> = d_image_basis(&t, k)
            .unwrap()
            .into_iter()
            .map(|p| p.c)
            .collect();
        let m = MatrixF::from_cols(&basis, k + 7);
        assert!(m.same_column_space(&d.matrix, &t));
    }
}

#[test]
fn class_counts_by_formula() {
    for (p, n) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
        let t = build_tower(p, n).unwrap();
        let q = t.q() as usize;
        let classes = pregular_classes(&t).unwrap();
        let count = |k: ClassKind| classes.iter().filter(|c| c.kind == k).count();
        assert_eq!(count(ClassKind::Central), q - 1);
        assert_eq!(count(ClassKind::Split), (q - 1) * (q - 2) / 2);
        assert_eq!(count(ClassKind::Nonsplit), q * (q - 1) / 2);
    }
    let t = build_tower(3, 1).unwrap();
    assert_eq!(pregular_classes(&t).unwrap().len(), 6);
}

#[test]
fn inventory_sizes() {
    for (p, n) in [(5, 1), (3, 2)] {
        let t = build_tower(p, n).unwrap();
        let q = t.q() as usize;
        let inv = irreducible_inventory(&CharacterContext::new(&t).unwrap()).unwrap();
        assert_eq!(inv.len(), (q - 1) * q);
    }
}

/// Evaluates a cyclotomic integer at `exp(2 pi i / m)`.
fn eval(c: &modrep::field_tower::CycloInt, m: u32) -> (f64, f64) {
    c.coeffs()
        .iter()
        .enumerate()
        .fold((0.0, 0.0), |(re, im), (j, x)| {
            let a = std::f64::consts::TAU * j as f64 / m as f64;
            let x = x.to_f64().unwrap();
            (re + x * a.cos(), im + x * a.sin())
        })
}

#[test]
fn brauer_characters_numerically() {
    let t = build_tower(5, 1).unwrap();
    let m = t.order();
    let ctx = CharacterContext::new(&t).unwrap();
    for k in 0..=8 {
        let ch = ctx.brauer_char_vk(k).unwrap();
        for (cls, val) in ctx.classes.iter().zip(&ch.values) {
            let v = GModule::sym_power(&t, k, Level::Quadratic).unwrap();
            // diagonalize by hand: eigenvalues x^i y^(k-i) of the representative
            let (x, y) = eigenvalues(&t, &cls.rep);
            let (mut re, mut im) = (0.0, 0.0);
            for i in 0..=k {
                let e = brute_dlog(&t, t.mul(t.pow(x, i), t.pow(y, k - i))) as f64;
                let a = std::f64::consts::TAU * e / m as f64;
                re += a.cos();
                im += a.sin();
            }
            let (vr, vi) = eval(val, m);
            assert!(
                (re - vr).abs() < 1e-9 && (im - vi).abs() < 1e-9,
                "k = {k}, {}",
                cls.label
            );
            assert_eq!(v.dim(), k as usize + 1);
        }
    }
}

/// Roots of `x^2 - tr x + det` in `F_{q^2}`, by search.
fn eigenvalues(t: &TowerData, g: &GroupElem) -> (Fe, Fe) {
    let tr = t.add(g.a(), g.d());
    let det = g.det(t);
    let roots: Vec<Fe> = std::iter::once(Fe::ZERO)
        .chain(t.all_units())
        .filter(|&x| t.add(t.sub(t.mul(x, x), t.mul(tr, x)), det).is_zero())
        .collect();
    match roots.as_slice() {
        [r] => (*r, *r),
        [r, s] => (*r, *s),
        _ => panic!("no roots"),
    }
}

#[test]
fn transversal_by_search() {
    for (n, p) in [(5, 7), (11, 5), (11, 7), (13, 11)] {
        let a = (1..p).find(|a| (a * n) % p == 1).unwrap();
        let tr = build_transversal(n, p).unwrap();
        assert_eq!(tr.a, a);
        assert_eq!(tr.b * p, 1 - a * n);
    }
}

#[test]
fn multiplication_rank_p5() {
    let t = build_tower(5, 1).unwrap();
    for k in 0..=4 {
        let m = alpha_coefficient_map(&t, k).unwrap();
        let ints: Vec<Vec<i64>> = (0..m.matrix.rows())
            .map(|r| m.matrix.row(r).iter().map(|x| x.0 as i64).collect())
            .collect();
        assert_eq!(rank_mod_p(ints, 5), (k + 5) as usize);
        assert_eq!(m.rank(), (k + 5) as usize);
    }
}

#[test]
fn cyclotomic_polynomial_vanishes_at_root() {
    for (p, n) in [(3, 1), (5, 1), (3, 2)] {
        let t = build_tower(p, n).unwrap();
        assert!(t.cyclo().phi_at_root().is_zero());
    }
}

#[test]
fn genus_bookkeeping() {
    for q in [3i64, 5, 7, 9, 11] {
        let total: i64 = (1..=q).map(|k| (k - 1) + (q - k)).sum();
        assert_eq!(total, q * (q - 1));
    }
    let t = build_tower(7, 1).unwrap();
    for k in 2..=6 {
        for form in modrep::curve_cohomology::DrForm::ALL {
            assert_eq!(
                modrep::curve_cohomology::build_drmodule(&t, k, form)
                    .unwrap()
                    .dim(),
                6
            );
        }
    }
}
