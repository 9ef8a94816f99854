//! The `-k` eigenspace of the first de Rham cohomology of the curve
//! `X Y^q - X^q Y = Z^(q+1)`, with its explicit basis and generator action,
//! and the comparison diagram with `V_(k-2)` and `V_(k+q-1)/D(V_k)`.
//!
//! Basis order: `A(a)` for `a = 0..k-2` (holomorphic differentials), then
//! `B(a)` for `a = -1, -2, .., -(q-k)`.

use std::sync::Arc;

use serde::Serialize;

use crate::characters::{CharacterData, ClassFunction};
use crate::error::{Error, Result};
use crate::field_tower::{binomial_mod, Fe, FieldTower, TowerData};
use crate::gmodule::{
    check_representation, find_isomorphism, max_rank_in_hom, section_exists, subquotient, Atom,
    EquivMap, GModule, Group, Level, SectionOutcome, Subquotient, DEFAULT_ENUMERATION_BOUND,
};
use crate::linalg::MatrixF;
use crate::serre_maps::{
    omega_map, serre_d, short_exact, theta_bar_row, weight_drop_projection, HomPoly, OmegaOutcome,
    ThetaBarRow,
};

/// Random products sampled by the representation check.
pub const REP_CHECK_SAMPLES: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DrForm {
    /// `SL_2(F_q)` over `F_q`.
    Sl2OverFq,
    /// `U_2 = F_{q^2}^x SL_2(F_q)` over `F_{q^2}`.
    U2OverFq2,
    /// `GL_2(F_q)` over `F_q`, with the diagonal torus acting by `x1^(a+1) x2^(k-a-1)`.
    Gl2Extended,
}

impl DrForm {
    pub const ALL: [DrForm; 3] = [DrForm::Sl2OverFq, DrForm::U2OverFq2, DrForm::Gl2Extended];

    fn level(self) -> Level {
        match self {
            DrForm::U2OverFq2 => Level::Quadratic,
            _ => Level::Base,
        }
    }

    fn groups(self) -> Vec<Group> {
        match self {
            DrForm::Sl2OverFq => vec![Group::SL2],
            DrForm::U2OverFq2 => vec![Group::SL2, Group::U2],
            DrForm::Gl2Extended => vec![Group::SL2, Group::GL2],
        }
    }

    /// The group the diagram is asserted for.
    pub fn group(self) -> Group {
        match self {
            DrForm::Sl2OverFq => Group::SL2,
            DrForm::U2OverFq2 => Group::U2,
            DrForm::Gl2Extended => Group::GL2,
        }
    }

    /// Determinant twists `(source of theta-bar, quotient)` on the bottom row.
    fn bottom_twists(self, k: i64) -> (i64, i64) {
        match self {
            DrForm::Sl2OverFq => (0, 0),
            DrForm::U2OverFq2 => (1 - k, 1 - k),
            DrForm::Gl2Extended => (1, 0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DrForm::Sl2OverFq => "sl2_over_fq",
            DrForm::U2OverFq2 => "u2_over_fq2",
            DrForm::Gl2Extended => "gl2_extended",
        }
    }
}

fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Index of `A(a)` or `B(a)` in the fixed basis.
pub fn dr_index(k: i64, a: i64) -> usize {
    if a >= 0 {
        a as usize
    } else {
        (k - 1 + (-a - 1)) as usize
    }
}

pub fn dr_labels(q: i64, k: i64) -> Vec<String> {
    let mut l: Vec<String> = (0..=k - 2).map(|a| format!("A({a})")).collect();
    l.extend((1..=q - k).map(|m| format!("B(-{m})")));
    l
}

/// Generator matrices for the fixed basis.
pub fn dr_atom_matrix(t: &TowerData, k: i64, form: DrForm, atom: &Atom) -> Result<MatrixF> {
    let q = t.q() as i64;
    let dim = (q - 1) as usize;
    let p = t.p();
    let int = |n: i64| t.from_int(n);
    let mut m = MatrixF::zeros(dim, dim);
    let add = |m: &mut MatrixF, row: usize, col: usize, v: Fe| {
        let cur = m.get(row, col);
        m.set(row, col, t.add(cur, v));
    };
    match *atom {
        Atom::Weyl => {
            for a in 0..=k - 2 {
                let img = k - 2 - a;
                m.set(dr_index(k, img), dr_index(k, a), int(sign(a + q - k + 1)));
            }
            for a in (k - q..=-1).rev() {
                let img = -(a + q + 1 - k);
                m.set(dr_index(k, img), dr_index(k, a), int(sign(a + k + 1)));
            }
        }
        Atom::Lower(u) => {
            let mu = t.neg(u);
            for a in 0..=k - 2 {
                for i in 0..=a {
                    let c = t.mul(int(binomial_mod(a, i, p) as i64), t.pow(mu, a - i));
                    add(&mut m, dr_index(k, i), dr_index(k, a), c);
                }
            }
            for a in (k - q..=-1).rev() {
                let col = dr_index(k, a);
                for i in 0..=a + q - k {
                    let c = t.mul(int(binomial_mod(q + a, i, p) as i64), t.pow(mu, i));
                    add(&mut m, dr_index(k, a - i), col, c);
                }
                for i in a + q + 1 - k..=q + a - 1 {
                    let c = t.mul(
                        t.mul(int(binomial_mod(q + a - 1, i, p) as i64), t.pow(mu, i)),
                        int(a),
                    );
                    add(&mut m, dr_index(k, q + a - 1 - i), col, c);
                }
            }
        }
        Atom::Diag(x1, x2) => match form {
            DrForm::Gl2Extended => {
                for a in k - q..=k - 2 {
                    let v = t.mul(t.pow(x1, a + 1), t.pow(x2, k - a - 1));
                    m.set(dr_index(k, a), dr_index(k, a), v);
                }
            }
            DrForm::Sl2OverFq | DrForm::U2OverFq2 => {
                if x2 != t.pow(x1, -q) {
                    return Err(Error::UnsupportedGroup {
                        group: format!("diag({}, {})", x1.0, x2.0),
                        module: "de Rham eigenspace (torus must be diag(t, t^-q))".into(),
                    });
                }
                for a in k - q..=k - 2 {
                    let v = t.pow(x1, a * (q + 1) + q - k + 1);
                    m.set(dr_index(k, a), dr_index(k, a), v);
                }
            }
        },
    }
    Ok(m)
}

/// `H^1_dR(C)_(-k)` with the generator action transcribed from the explicit
/// formulas.
pub fn build_drmodule(t: &FieldTower, k: i64, form: DrForm) -> Result<GModule> {
    check_k(t, k)?;
    let q = t.q() as i64;
    let tt = t.clone();
    let rule = Arc::new(move |a: &Atom| dr_atom_matrix(&tt, k, form, a));
    Ok(GModule::from_atoms(
        t,
        &format!("H1dR(-{k})"),
        dr_labels(q, k),
        form.groups(),
        form.level(),
        rule,
    ))
}

fn check_k(t: &TowerData, k: i64) -> Result<()> {
    if t.p() == 2 {
        return Err(Error::EvenCharacteristic("the de Rham model needs p odd"));
    }
    if k < 2 || k > t.p() as i64 - 1 {
        return Err(Error::OutOfRange(format!(
            "need 2 <= k <= p-1, got k = {k}"
        )));
    }
    Ok(())
}

/// Both rows and the three vertical maps for one form and one scalar `s`.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub form: DrForm,
    pub k: i64,
    pub s: Fe,
    pub dr: GModule,
    pub top: Subquotient,
    pub iota: EquivMap,
    pub pi: EquivMap,
    pub bottom: ThetaBarRow,
    pub phi: EquivMap,
    pub f: EquivMap,
    pub psi: EquivMap,
}

impl Diagram {
    /// Row and vertical matrices, entries rendered as coefficient vectors.
    pub fn matrices(&self) -> Vec<(String, Vec<Vec<Vec<u32>>>)> {
        let t = self.dr.tower();
        let render = |m: &MatrixF| -> Vec<Vec<Vec<u32>>> {
            (0..m.rows())
                .map(|i| m.row(i).iter().map(|&x| t.render(x)).collect())
                .collect()
        };
        [
            ("iota", &self.iota.matrix),
            ("pi", &self.pi.matrix),
            ("theta_bar", &self.bottom.theta_bar.matrix),
            ("pi_bottom", &self.bottom.to_coker.matrix),
            ("phi", &self.phi.matrix),
            ("f", &self.f.matrix),
            ("psi", &self.psi.matrix),
        ]
        .into_iter()
        .map(|(n, m)| (n.to_string(), render(m)))
        .collect()
    }
}

/// Scalar by which `f_s` sends `B(a)` to `X^(a+q) Y^(k-1-a)`: `(-1)^(a+1) k s`.
/// The opposite sign does not intertwine the unipotent action on the `B` block.
pub fn b_scalar(t: &TowerData, k: i64, a: i64, s: Fe) -> Fe {
    t.mul(t.from_int(sign(a + 1) * k), s)
}

/// Builds the diagram; `s` must be a unit of the working field of the form.
pub fn build_diagram(t: &FieldTower, k: i64, form: DrForm, s: Fe) -> Result<Diagram> {
    check_k(t, k)?;
    if s.is_zero() || (form.level() == Level::Base && !t.in_base(s)) {
        return Err(Error::OutOfRange(format!(
            "s = {} is not a unit of the working field",
            s.0
        )));
    }
    let q = t.q() as i64;
    let dr = build_drmodule(t, k, form)?;
    let a_vectors: Vec<Vec<Fe>> = (0..=k - 2)
        .map(|a| {
            let mut v = vec![Fe::ZERO; dr.dim()];
            v[dr_index(k, a)] = Fe::ONE;
            v
        })
        .collect();
    let top = subquotient(&dr, &a_vectors)?;
    let iota = EquivMap::new("iota", &top.sub, &dr, top.inclusion.clone());
    let pi = EquivMap::new("pi", &dr, &top.quotient, top.projection.clone());
    let (src_tw, quot_tw) = form.bottom_twists(k);
    let bottom = theta_bar_row(t, k as usize, form.level(), src_tw, quot_tw)?;

    let ku = k as usize;
    let mut phi = MatrixF::zeros(ku - 1, ku - 1);
    for a in 0..=k - 2 {
        phi.set(
            (k - 2 - a) as usize,
            a as usize,
            t.mul(t.from_int(sign(a)), s),
        );
    }
    let phi = EquivMap::new("phi", &top.sub, &bottom.theta_bar.source, phi);

    let dim = (q - 1) as usize;
    let mut f = MatrixF::zeros(dim, dim);
    for a in 0..=k - 2 {
        f.set(
            dr_index(k, a),
            dr_index(k, a),
            t.mul(t.from_int(sign(a)), s),
        );
    }
    for a in k - q..=-1 {
        // B(a) goes to a multiple of X^(a+q) Y^(k-1-a), the representative at the same index
        f.set(dr_index(k, a), dr_index(k, a), b_scalar(t, k, a, s));
    }
    let f = EquivMap::new("f", &dr, bottom.quotient.module(), f);

    let complement = MatrixF::from_fn(dim, dim - (ku - 1), |i, j| {
        if i == ku - 1 + j {
            Fe::ONE
        } else {
            Fe::ZERO
        }
    });
    let psi_m = bottom.to_coker.matrix.mul(&f.matrix, t).mul(&complement, t);
    let psi = EquivMap::new("psi", &top.quotient, &bottom.coker.quotient, psi_m);
    Ok(Diagram {
        form,
        k,
        s,
        dr,
        top,
        iota,
        pi,
        bottom,
        phi,
        f,
        psi,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckItem {
    pub fn new(name: impl Into<String>, passed: bool, detail: Option<String>) -> CheckItem {
        CheckItem {
            name: name.into(),
            passed,
            detail,
        }
    }

    fn from_result(name: impl Into<String>, r: Result<()>) -> CheckItem {
        match r {
            Ok(()) => CheckItem::new(name, true, None),
            Err(e) => CheckItem::new(name, false, Some(e.to_string())),
        }
    }
}

fn exact_item(name: &str, f: &EquivMap, g: &EquivMap, dims: (usize, usize, usize)) -> CheckItem {
    let ex = short_exact(f, g);
    let got = (f.source.dim(), f.target.dim(), g.target.dim());
    let passed = ex.holds() && got == dims;
    let detail = (!passed).then(|| format!("{ex:?}, dimensions {got:?}, expected {dims:?}"));
    CheckItem::new(name, passed, detail)
}

fn equal_item(name: &str, lhs: &MatrixF, rhs: &MatrixF) -> CheckItem {
    CheckItem::new(
        name,
        lhs == rhs,
        (lhs != rhs).then(|| "matrices differ".to_string()),
    )
}

/// Items (i)-(v) of the comparison for one `k`.
pub fn verify_diagram(
    t: &FieldTower,
    k: i64,
    s_list: &[Fe],
    seed: u64,
    chars: Option<&CharacterData>,
) -> Result<Vec<CheckItem>> {
    check_k(t, k)?;
    let q = t.q() as i64;
    let p = t.p() as i64;
    let ku = k as usize;
    let mut items = Vec::new();
    let dims = ((k - 1) as usize, (q - 1) as usize, (q - k) as usize);

    for form in DrForm::ALL {
        let tag = form.name();
        let dr = build_drmodule(t, k, form)?;
        let rep = check_representation(&dr, seed, REP_CHECK_SAMPLES)?;
        items.push(CheckItem::new(
            format!("{tag}/representation"),
            rep.passed,
            rep.witness,
        ));
        let mut ext_actions: Vec<Vec<MatrixF>> = Vec::new();
        for (si, &s) in s_list.iter().enumerate() {
            let d = build_diagram(t, k, form, s)?;
            let st = format!("{tag}/s{si}");
            if si == 0 {
                items.push(exact_item(
                    &format!("{tag}/top_row_exact"),
                    &d.iota,
                    &d.pi,
                    dims,
                ));
                items.push(exact_item(
                    &format!("{tag}/bottom_row_exact"),
                    &d.bottom.theta_bar,
                    &d.bottom.to_coker,
                    dims,
                ));
                for (n, m) in [("iota", &d.iota), ("pi", &d.pi)] {
                    items.push(CheckItem::from_result(
                        format!("{tag}/{n}_equivariant"),
                        m.check(form.group()),
                    ));
                }
                for (n, m) in [
                    ("theta_bar", &d.bottom.theta_bar),
                    ("pi_bottom", &d.bottom.to_coker),
                ] {
                    items.push(CheckItem::from_result(
                        format!("{tag}/{n}_equivariant"),
                        m.check(form.group()),
                    ));
                }
            }
            let inv = [&d.phi, &d.f, &d.psi]
                .iter()
                .all(|m| m.matrix.is_invertible(t));
            items.push(CheckItem::new(
                format!("{st}/verticals_invertible"),
                inv,
                None,
            ));
            for m in [&d.phi, &d.f, &d.psi] {
                items.push(CheckItem::from_result(
                    format!("{st}/{}_equivariant", m.name),
                    m.check(form.group()),
                ));
            }
            items.push(equal_item(
                &format!("{st}/left_square"),
                &d.f.matrix.mul(&d.iota.matrix, t),
                &d.bottom.theta_bar.matrix.mul(&d.phi.matrix, t),
            ));
            items.push(equal_item(
                &format!("{st}/right_square"),
                &d.psi.matrix.mul(&d.pi.matrix, t),
                &d.bottom.to_coker.matrix.mul(&d.f.matrix, t),
            ));
            if form == DrForm::Gl2Extended {
                let finv =
                    d.f.matrix
                        .inverse(t)
                        .ok_or_else(|| Error::Singular("f".into()))?;
                let mut transported = Vec::new();
                let mut ok = true;
                let mut detail = None;
                for x1 in t.base_units() {
                    for x2 in t.base_units() {
                        let atom = Atom::Diag(x1, x2);
                        let lhs = d.f.matrix.mul(&d.dr.atom_matrix(&atom)?, t);
                        let qm = d.bottom.quotient.module().atom_matrix(&atom)?;
                        let rhs = qm.mul(&d.f.matrix, t);
                        if ok && lhs != rhs {
                            ok = false;
                            detail = Some(format!("diag({}, {})", x1.0, x2.0));
                        }
                        transported.push(finv.mul(&qm, t).mul(&d.f.matrix, t));
                    }
                }
                items.push(CheckItem::new(
                    format!("{st}/torus_intertwined"),
                    ok,
                    detail,
                ));
                ext_actions.push(transported);
            }
        }
        if form == DrForm::Gl2Extended && !ext_actions.is_empty() {
            let same = ext_actions.iter().all(|a| *a == ext_actions[0]);
            items.push(CheckItem::new(
                format!("{tag}/extension_independent_of_s"),
                same,
                None,
            ));
        }
    }

    // untwisted GL_2 form of the bottom row: e ⊗ V_(k-2) -> V_(k+q-1)/D(V_k) -> coker
    let row = theta_bar_row(t, ku, Level::Base, 1, 0)?;
    items.push(exact_item(
        "gl2/bottom_row_exact",
        &row.theta_bar,
        &row.to_coker,
        dims,
    ));
    let target = GModule::sym_power(t, q - 1 - k, Level::Base)?.det_twist(k);
    let coker = &row.coker.quotient;
    if q == p {
        match omega_map(t, ku, Fe::ONE, Level::Base)? {
            OmegaOutcome::Map(omega) => {
                items.push(CheckItem::from_result(
                    "cokernel/omega_equivariant",
                    omega.check(Group::GL2),
                ));
                let kills = omega.matrix.mul(&row.theta_bar.matrix, t).is_zero();
                let exact = kills
                    && omega.is_surjective()
                    && omega.rank() + row.theta_bar.rank() == omega.source.dim();
                items.push(CheckItem::new(
                    "cokernel/omega_kernel_is_image",
                    exact,
                    None,
                ));
                let comp = complement_matrix(&row.coker, t);
                let iso = EquivMap::new("omega_bar", coker, &target, omega.matrix.mul(&comp, t));
                let inv = iso.matrix.is_invertible(t);
                items.push(CheckItem::new("cokernel/iso_invertible", inv, None));
                items.push(CheckItem::from_result(
                    "cokernel/iso_equivariant",
                    iso.check(Group::GL2),
                ));
            }
            OmegaOutcome::Impossible(_) => {
                return Err(Error::Internal("q = p produced a certificate".into()));
            }
        }
    } else {
        match omega_map(t, ku, Fe::ONE, Level::Base)? {
            OmegaOutcome::Impossible(c) => items.push(CheckItem::new(
                "cokernel/no_map_certificate",
                true,
                Some(format!(
                    "binom({}, {}) = {} = 0 mod {}",
                    c.n, c.r, c.binomial, c.p
                )),
            )),
            OmegaOutcome::Map(_) => {
                items.push(CheckItem::new("cokernel/no_map_certificate", false, None))
            }
        }
        let iso = find_isomorphism(coker, &target, Group::GL2, DEFAULT_ENUMERATION_BOUND)?;
        items.push(CheckItem::new(
            "cokernel/no_isomorphism",
            iso.is_none(),
            None,
        ));
        let owned;
        let data = match chars {
            Some(c) => c,
            None => {
                owned = CharacterData::new(t)?;
                &owned
            }
        };
        let lhs = data.ctx.brauer_char_of_module(coker)?;
        let rhs = twisted_vk(data, k, q - 1 - k);
        let same = data.decompose(&lhs)? == data.decompose(&rhs)?;
        items.push(CheckItem::new(
            "cokernel/semisimplification_matches",
            same,
            None,
        ));
    }
    Ok(items)
}

fn twisted_vk(data: &CharacterData, twist: i64, k: i64) -> ClassFunction {
    data.ctx
        .mul(&data.ctx.det_power(twist), &data.ctx.vk_virtual(k))
}

/// Standard-basis complement columns used as quotient representatives.
fn complement_matrix(sq: &Subquotient, t: &TowerData) -> MatrixF {
    // projection . complement = I, and the complement is the left inverse on the quotient
    let n = sq.projection.cols();
    let d = sq.quotient.dim();
    let pivots: Vec<usize> = {
        let (_, piv) = sq.inclusion.column_echelon(t);
        piv
    };
    let rest: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
    MatrixF::from_fn(n, d, |i, j| if rest[j] == i { Fe::ONE } else { Fe::ZERO })
}

/// Non-splitting and the dual identification of the cokernel, plus the
/// weight-drop sequence when `q = p > 3`.
pub fn nonsplit_checks(t: &FieldTower, k: i64) -> Result<Vec<CheckItem>> {
    check_k(t, k)?;
    let q = t.q() as i64;
    let mut items = Vec::new();
    let row = theta_bar_row(t, k as usize, Level::Base, 0, 0)?;
    let to_coker = restrict_map(&row.to_coker, Group::SL2);
    let outcome = section_exists(&to_coker, Group::SL2)?;
    items.push(CheckItem::new(
        "bottom_row/no_sl2_section",
        !outcome.exists(),
        certificate_detail(&outcome),
    ));
    let dual = GModule::sym_power(t, q - 1 - k, Level::Base)?.dual();
    let iso = find_isomorphism(
        &row.coker.quotient,
        &dual,
        Group::SL2,
        DEFAULT_ENUMERATION_BOUND,
    )?;
    items.push(CheckItem::new(
        "cokernel/dual_isomorphism",
        iso.is_some(),
        None,
    ));
    if q == t.p() as i64 && q > 3 {
        items.extend(weight_drop_checks(t)?);
    }
    Ok(items)
}

fn restrict_map(m: &EquivMap, g: Group) -> EquivMap {
    EquivMap::new(
        &m.name,
        &m.source.clone().restricted(&[g]),
        &m.target.clone().restricted(&[g]),
        m.matrix.clone(),
    )
}

fn certificate_detail(o: &SectionOutcome) -> Option<String> {
    match o {
        SectionOutcome::Empty { certificate } => Some(format!(
            "inconsistency certificate with {} nonzero entries",
            certificate.iter().filter(|x| !x.is_zero()).count()
        )),
        SectionOutcome::Section(_) => Some("a section exists".into()),
    }
}

/// `0 -> V_1 -> V_p -> e ⊗ V_(p-2) -> 0` is exact and has no `GL_2` section.
pub fn weight_drop_checks(t: &FieldTower) -> Result<Vec<CheckItem>> {
    let p = t.p() as usize;
    let d = serre_d(t, 1, Level::Base)?;
    let pr = weight_drop_projection(t)?;
    let mut items = vec![
        exact_item("weight_drop/exact", &d, &pr, (2, p + 1, p - 1)),
        CheckItem::from_result("weight_drop/projection_equivariant", pr.check(Group::GL2)),
    ];
    let outcome = section_exists(&pr, Group::GL2)?;
    items.push(CheckItem::new(
        "weight_drop/no_gl2_section",
        !outcome.exists(),
        certificate_detail(&outcome),
    ));
    Ok(items)
}

/// Largest rank of a `GL_2(F_p)`-map `V_p -> V_(2p-1)`; an embedding would need `p+1`.
pub fn embedding_rank(t: &FieldTower) -> Result<(usize, usize)> {
    let p = t.p() as i64;
    let vp = GModule::sym_power(t, p, Level::Base)?;
    let v2p = GModule::sym_power(t, 2 * p - 1, Level::Base)?;
    let r = max_rank_in_hom(&vp, &v2p, Group::GL2, DEFAULT_ENUMERATION_BOUND)?;
    Ok((r, (p + 1) as usize))
}

/// The polynomials `g_(a,i,s)` whose membership in `D(V_k)` is equivalent to
/// `f_s` commuting with the unipotent generators on `B(a)`.
pub fn unipotent_obstructions(t: &TowerData, k: i64, s: Fe) -> Vec<((i64, i64), HomPoly)> {
    let q = t.q() as i64;
    let deg = (k + q - 1) as usize;
    let mut out = Vec::new();
    for a in k - q..=-1 {
        let delta = b_scalar(t, k, a, s);
        for i in a + q - k + 1..=a + q - 1 {
            let c1 = t.mul(t.from_int((a - i) * sign(a)), s);
            let c2 = t.neg(t.add(c1, delta));
            let g = HomPoly::monomial(deg, (a - i + q + q - 1) as usize, c1)
                .add(&HomPoly::monomial(deg, (a - i + q) as usize, c2), t);
            out.push(((a, i), g));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_tower::build_tower;
    use crate::serre_maps::d_image_basis;

    #[test]
    fn literal_formulas_form_a_representation() {
        let t = build_tower(5, 1).unwrap();
        for k in 2..=4 {
            for form in DrForm::ALL {
                let dr = build_drmodule(&t, k, form).unwrap();
                assert_eq!(dr.dim(), 4);
                let r = check_representation(&dr, 1, 20).unwrap();
                assert!(r.passed, "k = {k}, {form:?}: {:?}", r.witness);
            }
        }
    }

    #[test]
    fn torus_eigenvalues() {
        let t = build_tower(5, 1).unwrap();
        let k = 3;
        for x in t.all_units() {
            let atom = Atom::Diag(x, t.pow(x, -5));
            let m = dr_atom_matrix(&t, k, DrForm::U2OverFq2, &atom).unwrap();
            for a in k - 5..=k - 2 {
                let i = dr_index(k, a);
                assert_eq!(m.get(i, i), t.pow(x, a * 6 + 5 - k + 1));
            }
        }
        assert!(dr_atom_matrix(
            &t,
            k,
            DrForm::Sl2OverFq,
            &Atom::Diag(t.from_int(2), Fe::ONE)
        )
        .is_err());
    }

    #[test]
    fn phi_and_f_examples() {
        let t = build_tower(5, 1).unwrap();
        let s = t.from_int(2);
        let d = build_diagram(&t, 3, DrForm::Sl2OverFq, s).unwrap();
        // A(0) -> s Y^(k-2)
        assert_eq!(d.phi.matrix.get(1, 0), s);
        // B(-1) -> k s X^(q-1) Y^k
        let i = dr_index(3, -1);
        assert_eq!(d.f.matrix.get(i, i), t.mul(t.from_int(3), s));
        assert_eq!(d.f.rank(), 4);
    }

    #[test]
    fn obstructions_lie_in_image_of_d() {
        let t = build_tower(5, 1).unwrap();
        let k = 3;
        let basis: Vec<Vec<Fe>> = d_image_basis(&t, k as usize)
            .unwrap()
            .into_iter()
            .map(|p| p.c)
            .collect();
        let span = MatrixF::from_cols(&basis, (k + 5) as usize);
        for s in t.base_units() {
            for (_, g) in unipotent_obstructions(&t, k, s) {
                let v = MatrixF::from_cols(&[g.c], (k + 5) as usize);
                assert!(span.spans(&v, &t));
            }
        }
    }

    #[test]
    fn diagram_q5_k3() {
        let t = build_tower(5, 1).unwrap();
        let s_list = [Fe::ONE, t.from_int(2), t.eps()];
        for item in verify_diagram(&t, 3, &s_list, 7, None).unwrap() {
            assert!(item.passed, "{item:?}");
        }
    }

    #[test]
    fn nonsplit_q5_k3() {
        let t = build_tower(5, 1).unwrap();
        for item in nonsplit_checks(&t, 3).unwrap() {
            assert!(item.passed, "{item:?}");
        }
        let (r, need) = embedding_rank(&t).unwrap();
        assert!(r < need);
    }

    #[test]
    fn printed_b_sign_does_not_intertwine() {
        let t = build_tower(5, 1).unwrap();
        let mut d = build_diagram(&t, 3, DrForm::Sl2OverFq, Fe::ONE).unwrap();
        for a in -2..=-1 {
            let i = dr_index(3, a);
            let v = d.f.matrix.get(i, i);
            d.f.matrix.set(i, i, t.neg(v));
        }
        assert!(d.f.check(Group::SL2).is_err());
    }

    #[test]
    fn weyl_squared_is_minus_one() {
        let t = build_tower(7, 1).unwrap();
        let m1 = t.from_int(-1);
        for k in 2..=6 {
            for form in DrForm::ALL {
                let w = dr_atom_matrix(&t, k, form, &Atom::Weyl).unwrap();
                let z = dr_atom_matrix(&t, k, form, &Atom::Diag(m1, m1)).unwrap();
                assert_eq!(w.mul(&w, &t), z, "k = {k}, {form:?}");
            }
        }
    }

    #[test]
    fn diagram_q9_k2_takes_certificate_branch() {
        let t = build_tower(3, 2).unwrap();
        let items =
            verify_diagram(&t, 2, &[Fe::ONE, t.base_units().nth(2).unwrap()], 3, None).unwrap();
        for item in &items {
            assert!(item.passed, "{item:?}");
        }
        assert!(items
            .iter()
            .any(|i| i.name == "cokernel/no_map_certificate"));
    }

    #[test]
    fn diagram_q7_all_k() {
        let t = build_tower(7, 1).unwrap();
        for k in 2..=6 {
            for item in verify_diagram(&t, k, &[Fe::ONE, t.from_int(2)], 5, None).unwrap() {
                assert!(item.passed, "k = {k}: {item:?}");
            }
        }
    }
}
