//! Brauer characters of `GL_2(F_q)` with values in `Z[z]`, virtual modules in
//! the Grothendieck group, and decomposition over the irreducible Brauer
//! characters.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field_tower::{CycloInt, CycloRing, Fe, FieldTower, TowerData};
use crate::gmodule::{GModule, Group, GroupElem, Level};
use crate::linalg::charpoly;
use crate::serre_maps::cuspidal_quotient;

/// Largest `q = p^n` with `n > 1` accepted by [`irreducible_inventory`].
pub const INVENTORY_BOUND_COMPOSITE: u32 = 9;
/// Largest prime `q` accepted by [`irreducible_inventory`].
pub const INVENTORY_BOUND_PRIME: u32 = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassKind {
    Central,
    Split,
    Nonsplit,
}

/// A `p`-regular conjugacy class. `eig` holds the discrete logs in
/// `F_{q^2}^x` of the two eigenvalues of the representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRep {
    pub kind: ClassKind,
    pub label: String,
    pub rep: GroupElem,
    pub size: u64,
    pub eig: (u64, u64),
}

/// The canonical list of `p`-regular classes: centrals by discrete log,
/// split classes with `dlog a < dlog b` lexicographically, then nonsplit
/// classes by `min(e, q e mod M)`.
pub fn pregular_classes(t: &TowerData) -> Result<Vec<ClassRep>> {
    if t.p() == 2 {
        return Err(Error::EvenCharacteristic(
            "nonsplit representatives need sqrt(eps)",
        ));
    }
    let q = t.q() as u64;
    let m = t.order() as u64;
    let mut units: Vec<(u64, Fe)> = t
        .base_units()
        .map(|a| Ok((t.dlog(a)? as u64, a)))
        .collect::<Result<_>>()?;
    units.sort();
    let mut out = Vec::new();
    for &(la, a) in &units {
        out.push(ClassRep {
            kind: ClassKind::Central,
            label: format!("central(g^{la})"),
            rep: GroupElem::diag(a, a),
            size: 1,
            eig: (la, la),
        });
    }
    for (i, &(la, a)) in units.iter().enumerate() {
        for &(lb, b) in &units[i + 1..] {
            out.push(ClassRep {
                kind: ClassKind::Split,
                label: format!("split(g^{la},g^{lb})"),
                rep: GroupElem::diag(a, b),
                size: q * (q + 1),
                eig: (la, lb),
            });
        }
    }
    for e in 1..m {
        if e % (q + 1) == 0 || e > (q * e) % m {
            continue;
        }
        let c = t.exp_g(e as i64);
        let rows = t.iota(c)?;
        out.push(ClassRep {
            kind: ClassKind::Nonsplit,
            label: format!("nonsplit(g^{e})"),
            rep: GroupElem { m: rows },
            size: q * (q - 1),
            eig: (e, (q * e) % m),
        });
    }
    Ok(out)
}

/// Values on the canonical class list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    pub values: Vec<CycloInt>,
}

impl ClassFunction {
    pub fn zero(ring: &CycloRing, n: usize) -> ClassFunction {
        ClassFunction {
            values: vec![ring.zero(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(CycloInt::is_zero)
    }

    pub fn add(&self, o: &ClassFunction) -> ClassFunction {
        ClassFunction {
            values: self
                .values
                .iter()
                .zip(&o.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, o: &ClassFunction) -> ClassFunction {
        ClassFunction {
            values: self
                .values
                .iter()
                .zip(&o.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> ClassFunction {
        ClassFunction {
            values: self.values.iter().map(|a| -a).collect(),
        }
    }

    /// Coefficient vectors, one per class.
    pub fn render(&self) -> Vec<Vec<String>> {
        self.values
            .iter()
            .map(|v| v.coeffs().iter().map(|c| c.to_string()).collect())
            .collect()
    }
}

/// Class list plus the cyclotomic ring, shared by all character computations
/// over one tower.
pub struct CharacterContext {
    pub tower: FieldTower,
    pub classes: Vec<ClassRep>,
}

impl CharacterContext {
    pub fn new(t: &FieldTower) -> Result<CharacterContext> {
        Ok(CharacterContext {
            tower: t.clone(),
            classes: pregular_classes(t)?,
        })
    }

    fn ring(&self) -> &CycloRing {
        self.tower.cyclo()
    }

    fn m(&self) -> i64 {
        self.tower.order() as i64
    }

    fn class_function_of(&self, f: impl Fn(&ClassRep, &mut Vec<i64>)) -> ClassFunction {
        let m = self.m() as usize;
        ClassFunction {
            values: self
                .classes
                .iter()
                .map(|c| {
                    let mut counts = vec![0i64; m];
                    f(c, &mut counts);
                    self.ring().from_exponent_counts(&counts)
                })
                .collect(),
        }
    }

    /// `e^j`, the `j`-th power of the determinant character.
    pub fn det_power(&self, j: i64) -> ClassFunction {
        let m = self.m();
        self.class_function_of(|c, counts| {
            let e = (j * (c.eig.0 + c.eig.1) as i64).rem_euclid(m);
            counts[e as usize] += 1;
        })
    }

    pub fn mul(&self, a: &ClassFunction, b: &ClassFunction) -> ClassFunction {
        ClassFunction {
            values: a
                .values
                .iter()
                .zip(&b.values)
                .map(|(x, y)| self.ring().mul(x, y))
                .collect(),
        }
    }

    /// Brauer character of `V_k` by geometric sums of the eigenvalue lifts.
    pub fn brauer_char_vk(&self, k: i64) -> Result<ClassFunction> {
        if k < 0 {
            return Err(Error::OutOfRange(format!("V_k needs k >= 0, got {k}")));
        }
        let m = self.m();
        Ok(self.class_function_of(|c, counts| {
            let (x, y) = (c.eig.0 as i64, c.eig.1 as i64);
            for i in 0..=k {
                counts[(i * x + (k - i) * y).rem_euclid(m) as usize] += 1;
            }
        }))
    }

    /// Virtual `V_k` for every integer `k`: `0` at `k = -1` and
    /// `-e^(1+k) V_(-k-2)` below.
    pub fn vk_virtual(&self, k: i64) -> ClassFunction {
        match k {
            k if k >= 0 => self.brauer_char_vk(k).expect("k >= 0"),
            -1 => ClassFunction::zero(self.ring(), self.classes.len()),
            k => self
                .mul(&self.det_power(1 + k), &self.vk_virtual(-k - 2))
                .neg(),
        }
    }

    /// Brauer character of a module from the Teichmüller lifts of the roots of
    /// its characteristic polynomials.
    pub fn brauer_char_of_module(&self, module: &GModule) -> Result<ClassFunction> {
        let t = &self.tower;
        let m = self.m() as usize;
        let mut values = Vec::with_capacity(self.classes.len());
        for c in &self.classes {
            let a = module.action_matrix(&c.rep)?;
            let roots = roots_with_multiplicity(&charpoly(&a, t), t);
            if roots.len() != module.dim() {
                return Err(Error::Internal(format!(
                    "characteristic polynomial at {} does not split over F_q^2",
                    c.label
                )));
            }
            let mut counts = vec![0i64; m];
            for r in roots {
                counts[t.dlog(r)? as usize] += 1;
            }
            values.push(self.ring().from_exponent_counts(&counts));
        }
        Ok(ClassFunction { values })
    }

    /// Cuspidal character attached to `chi^k`.
    pub fn cuspidal_char(&self, k: i64) -> Result<CuspidalCharacter> {
        let q = self.tower.q() as i64;
        if k.rem_euclid(q + 1) == 0 {
            return Err(Error::OutOfRange(format!("k = {k} is divisible by q+1")));
        }
        let m = self.m();
        let brauer = self.class_function_of(|c, counts| {
            let (x, y) = (c.eig.0 as i64, c.eig.1 as i64);
            match c.kind {
                ClassKind::Central => counts[(k * x).rem_euclid(m) as usize] += q - 1,
                ClassKind::Split => {}
                ClassKind::Nonsplit => {
                    counts[(k * x).rem_euclid(m) as usize] -= 1;
                    counts[(k * y).rem_euclid(m) as usize] -= 1;
                }
            }
        });
        let t = &self.tower;
        let mut units: Vec<(u32, Fe)> = t.base_units().map(|a| (t.dlog(a).unwrap(), a)).collect();
        units.sort();
        let unipotent = units
            .into_iter()
            .map(|(la, a)| {
                let v = self.ring().root(k * la as i64);
                (GroupElem::new(a, Fe::ONE, Fe::ZERO, a), -&v)
            })
            .collect();
        Ok(CuspidalCharacter { brauer, unipotent })
    }
}

/// The ordinary cuspidal character: its restriction to `p`-regular classes,
/// plus the values on `[[a,1],[0,a]]`.
#[derive(Clone, Debug)]
pub struct CuspidalCharacter {
    pub brauer: ClassFunction,
    pub unipotent: Vec<(GroupElem, CycloInt)>,
}

/// Roots in `F_{q^2}^x` of a polynomial (low degree first), with multiplicity.
pub fn roots_with_multiplicity(poly: &[Fe], t: &TowerData) -> Vec<Fe> {
    let mut p = poly.to_vec();
    let mut roots = Vec::new();
    for r in t.all_units() {
        loop {
            if p.len() < 2 {
                break;
            }
            // synthetic division by (x - r)
            let n = p.len() - 1;
            let mut quot = vec![Fe::ZERO; n];
            let mut acc = Fe::ZERO;
            for i in (0..=n).rev() {
                acc = t.add(t.mul(acc, r), p[i]);
                if i > 0 {
                    quot[i - 1] = acc;
                }
            }
            if !acc.is_zero() {
                break;
            }
            roots.push(r);
            p = quot;
        }
    }
    roots
}

/// Per-`k` outcome of the Grothendieck-group identities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K0Record {
    pub k: i64,
    /// `V_k - e V_(k-q-1) = V_(k-q+1) - e V_(k-2q)`.
    pub periodicity: bool,
    /// `V_(k+q-1) - V_k` equals the cuspidal restriction; `None` when `q+1 | k`.
    pub cuspidal_difference: Option<bool>,
    /// Character of `V_(k+q-1)/D(V_k)` equals the cuspidal restriction, for `1 <= k <= p-1`.
    pub quotient_character: Option<bool>,
}

pub fn check_k0_identities(
    ctx: &CharacterContext,
    ks: impl IntoIterator<Item = i64>,
) -> Result<Vec<K0Record>> {
    let t = &ctx.tower;
    let q = t.q() as i64;
    let p = t.p() as i64;
    let e = ctx.det_power(1);
    let mut out = Vec::new();
    for k in ks {
        let lhs = ctx
            .vk_virtual(k)
            .sub(&ctx.mul(&e, &ctx.vk_virtual(k - q - 1)));
        let rhs = ctx
            .vk_virtual(k - q + 1)
            .sub(&ctx.mul(&e, &ctx.vk_virtual(k - 2 * q)));
        let cusp = if k.rem_euclid(q + 1) == 0 {
            None
        } else {
            Some(ctx.cuspidal_char(k)?.brauer)
        };
        let cuspidal_difference = cusp
            .as_ref()
            .map(|c| &ctx.vk_virtual(k + q - 1).sub(&ctx.vk_virtual(k)) == c);
        let quotient_character = match &cusp {
            Some(c) if (1..p).contains(&k) => {
                let quot = cuspidal_quotient(t, k as usize, Level::Base, 0)?;
                Some(&ctx.brauer_char_of_module(quot.module())? == c)
            }
            _ => None,
        };
        out.push(K0Record {
            k,
            periodicity: lhs == rhs,
            cuspidal_difference,
            quotient_character,
        });
    }
    Ok(out)
}

/// Exact integer inverse data for a nonsingular integer matrix: `adj`
/// satisfies `A adj = det I`.
#[derive(Clone, Debug)]
struct IntegerInverse {
    det: BigInt,
    adj: Vec<Vec<BigInt>>,
}

/// Fraction-free elimination on `[A | I]` followed by exact back substitution.
fn bareiss_inverse(a: &[Vec<BigInt>]) -> Option<IntegerInverse> {
    let n = a.len();
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| BigInt::from((i == j) as i32)));
            r
        })
        .collect();
    let width = 2 * n;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        let piv = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(k, piv);
        for i in k + 1..n {
            for j in k + 1..width {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    let mut adj = vec![vec![BigInt::zero(); n]; n];
    for col in 0..n {
        for i in (0..n).rev() {
            let mut acc = &det * &m[i][n + col];
            for j in i + 1..n {
                acc -= &m[i][j] * &adj[j][col];
            }
            let (quot, rem) = acc.div_rem(&m[i][i]);
            debug_assert!(rem.is_zero());
            adj[i][col] = quot;
        }
    }
    Some(IntegerInverse { det, adj })
}

/// The irreducible Brauer characters `e^a ⊗ V_(k_0) ⊗ Fr(V_(k_1)) ⊗ ...`.
pub struct IrreducibleInventory {
    pub labels: Vec<String>,
    /// `(a, [k_0, .., k_(n-1)])` per member.
    pub params: Vec<(i64, Vec<i64>)>,
    pub characters: Vec<ClassFunction>,
    rows: Vec<(usize, usize)>,
    inverse: IntegerInverse,
}

impl IrreducibleInventory {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The `GModule` realizing member `i`.
    pub fn module(&self, t: &FieldTower, i: usize) -> Result<GModule> {
        let (a, ks) = &self.params[i];
        let mut m = GModule::sym_power(t, ks[0], Level::Base)?;
        for (j, &k) in ks.iter().enumerate().skip(1) {
            let fr = GModule::sym_power(t, k, Level::Base)?.frobenius_twist(j as u32);
            m = m.tensor(&fr)?;
        }
        Ok(m.det_twist(*a)
            .restricted(&[Group::GL2])
            .renamed(&self.labels[i]))
    }
}

fn flat_row(chars: &[ClassFunction], class: usize, coord: usize) -> Vec<BigInt> {
    chars
        .iter()
        .map(|c| c.values[class].coeffs()[coord].clone())
        .collect()
}

pub fn irreducible_inventory(ctx: &CharacterContext) -> Result<IrreducibleInventory> {
    let t = &ctx.tower;
    let (p, n, q) = (t.p() as i64, t.n(), t.q());
    let bound = if n == 1 {
        INVENTORY_BOUND_PRIME
    } else {
        INVENTORY_BOUND_COMPOSITE
    };
    if q > bound {
        return Err(Error::BoundExceeded {
            q: q as u64,
            bound: bound as u64,
        });
    }
    let mm = ctx.m();
    let mut labels = Vec::new();
    let mut params = Vec::new();
    let mut characters = Vec::new();
    for a in 0..q as i64 - 1 {
        for idx in 0..q as i64 {
            let ks: Vec<i64> = (0..n).map(|i| (idx / p.pow(i)) % p).collect();
            let mut label = format!("e^{a}");
            for (i, k) in ks.iter().enumerate() {
                label.push_str(&if i == 0 {
                    format!("*V{k}")
                } else {
                    format!("*Fr{i}(V{k})")
                });
            }
            let ch = ctx.class_function_of(|c, counts| {
                let (x, y) = (c.eig.0 as i64, c.eig.1 as i64);
                let mut cur = vec![(a * (x + y)).rem_euclid(mm)];
                for (i, &k) in ks.iter().enumerate() {
                    let pi = p.pow(i as u32);
                    let mut next = Vec::with_capacity(cur.len() * (k as usize + 1));
                    for &base in &cur {
                        for j in 0..=k {
                            next.push((base + pi * (j * x + (k - j) * y)).rem_euclid(mm));
                        }
                    }
                    cur = next;
                }
                for e in cur {
                    counts[e as usize] += 1;
                }
            });
            labels.push(label);
            params.push((a, ks));
            characters.push(ch);
        }
    }
    let size = characters.len();
    if size != ctx.classes.len() {
        return Err(Error::Internal(format!(
            "{size} irreducibles for {} classes",
            ctx.classes.len()
        )));
    }
    let rows = independent_rows(&characters, ctx.ring().degree())
        .ok_or_else(|| Error::Internal("character matrix is singular".into()))?;
    let square: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|&(c, j)| flat_row(&characters, c, j))
        .collect();
    let inverse = bareiss_inverse(&square)
        .ok_or_else(|| Error::Internal("character matrix is singular".into()))?;
    Ok(IrreducibleInventory {
        labels,
        params,
        characters,
        rows,
        inverse,
    })
}

const SELECTION_PRIME: i64 = 2_147_483_647;

/// Greedy choice of flattened rows (class, coordinate) that are independent
/// modulo a large prime.
fn independent_rows(chars: &[ClassFunction], degree: usize) -> Option<Vec<(usize, usize)>> {
    let n = chars.len();
    let classes = chars.first().map_or(0, ClassFunction::len);
    let reduce = |b: &BigInt| -> i64 {
        b.mod_floor(&BigInt::from(SELECTION_PRIME))
            .to_i64()
            .unwrap()
    };
    let mut basis: Vec<(usize, Vec<i64>)> = Vec::new();
    let mut chosen = Vec::new();
    'outer: for c in 0..classes {
        for j in 0..degree {
            let mut v: Vec<i64> = flat_row(chars, c, j).iter().map(reduce).collect();
            for (piv, b) in &basis {
                let f = v[*piv];
                if f != 0 {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x = (*x - f * y % SELECTION_PRIME).rem_euclid(SELECTION_PRIME);
                    }
                }
            }
            let Some(piv) = v.iter().position(|&x| x != 0) else {
                continue;
            };
            let inv = mod_pow(v[piv], SELECTION_PRIME - 2);
            for x in v.iter_mut() {
                *x = *x * inv % SELECTION_PRIME;
            }
            for (_, b) in basis.iter_mut() {
                let f = b[piv];
                if f != 0 {
                    for (x, y) in b.iter_mut().zip(&v) {
                        *x = (*x - f * y % SELECTION_PRIME).rem_euclid(SELECTION_PRIME);
                    }
                }
            }
            basis.push((piv, v));
            chosen.push((c, j));
            if chosen.len() == n {
                break 'outer;
            }
        }
    }
    (chosen.len() == n).then_some(chosen)
}

fn mod_pow(mut b: i64, mut e: i64) -> i64 {
    let mut acc = 1i64;
    b %= SELECTION_PRIME;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % SELECTION_PRIME;
        }
        b = b * b % SELECTION_PRIME;
        e >>= 1;
    }
    acc
}

/// Class list and inventory for one tower, built once and shared.
pub struct CharacterData {
    pub ctx: CharacterContext,
    pub inventory: IrreducibleInventory,
}

impl CharacterData {
    pub fn new(t: &FieldTower) -> Result<CharacterData> {
        let ctx = CharacterContext::new(t)?;
        let inventory = irreducible_inventory(&ctx)?;
        Ok(CharacterData { ctx, inventory })
    }

    pub fn decompose(&self, f: &ClassFunction) -> Result<Vec<BigInt>> {
        decompose_virtual(&self.inventory, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub coefficients: Vec<(String, String)>,
    pub positive: bool,
}

/// Integer coefficients of a virtual Brauer character over the inventory.
pub fn decompose_virtual(inv: &IrreducibleInventory, f: &ClassFunction) -> Result<Vec<BigInt>> {
    let n = inv.len();
    let b: Vec<&BigInt> = inv
        .rows
        .iter()
        .map(|&(c, j)| &f.values[c].coeffs()[j])
        .collect();
    let mut x = Vec::with_capacity(n);
    for i in 0..n {
        let num: BigInt = (0..n).map(|j| &inv.inverse.adj[i][j] * b[j]).sum();
        let (quot, rem) = num.div_rem(&inv.inverse.det);
        if !rem.is_zero() {
            return Err(Error::NonIntegral(format!(
                "coefficient of {} is not an integer",
                inv.labels[i]
            )));
        }
        x.push(quot);
    }
    // every flattened coordinate, not only the selected ones
    let ring_deg = f.values.first().map_or(0, |v| v.coeffs().len());
    for c in 0..f.len() {
        for j in 0..ring_deg {
            let lhs: BigInt = inv
                .characters
                .iter()
                .zip(&x)
                .map(|(ch, xi)| &ch.values[c].coeffs()[j] * xi)
                .sum();
            if lhs != f.values[c].coeffs()[j] {
                return Err(Error::NonIntegral(format!(
                    "no integral combination matches class {c}, coordinate {j}"
                )));
            }
        }
    }
    Ok(x)
}

pub fn describe(inv: &IrreducibleInventory, coeffs: &[BigInt]) -> Decomposition {
    Decomposition {
        coefficients: inv
            .labels
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(l, c)| (l.clone(), c.to_string()))
            .collect(),
        positive: coeffs.iter().all(|c| !c.is_negative()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositivityRecord {
    pub k: i64,
    pub positive: bool,
    pub expected: bool,
}

/// Decides positivity of `V_k - V_(k-q+1)` for each `k`, with the predicted
/// answer `k != -2 mod q+1`.
pub fn check_positivity_law(
    ctx: &CharacterContext,
    inv: &IrreducibleInventory,
    ks: impl IntoIterator<Item = i64>,
) -> Result<Vec<PositivityRecord>> {
    let q = ctx.tower.q() as i64;
    ks.into_iter()
        .map(|k| {
            let f = ctx.vk_virtual(k).sub(&ctx.vk_virtual(k - (q - 1)));
            let x = decompose_virtual(inv, &f)?;
            Ok(PositivityRecord {
                k,
                positive: x.iter().all(|c| !c.is_negative()),
                expected: (k + 2).rem_euclid(q + 1) != 0,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_tower::build_tower;

    #[test]
    fn class_counts() {
        for (p, n, count) in [(3, 1, 6), (5, 1, 20), (3, 2, 72)] {
            let t = build_tower(p, n).unwrap();
            let cl = pregular_classes(&t).unwrap();
            assert_eq!(cl.len(), count);
            let total: u64 = cl.iter().map(|c| c.size).sum();
            let q = t.q() as u64;
            // p-regular elements: everything outside the unipotent-type classes
            assert_eq!(
                total,
                q * (q - 1) * (q - 1) * (q + 1) - (q - 1) * (q * q - 1)
            );
        }
    }

    #[test]
    fn small_characters() {
        let t = build_tower(5, 1).unwrap();
        let ctx = CharacterContext::new(&t).unwrap();
        let one = ctx.brauer_char_vk(0).unwrap();
        assert!(one.values.iter().all(|v| *v == t.cyclo().one()));
        let v1 = ctx.brauer_char_vk(1).unwrap();
        for (c, v) in ctx.classes.iter().zip(&v1.values) {
            let expect = &t.cyclo().root(c.eig.0 as i64) + &t.cyclo().root(c.eig.1 as i64);
            assert_eq!(*v, expect);
        }
        assert!(ctx.vk_virtual(-1).is_zero());
        assert_eq!(ctx.vk_virtual(-2), ctx.det_power(-1).neg());
    }

    #[test]
    fn roots_of_product() {
        let t = build_tower(5, 1).unwrap();
        // (x-1)^2 (x-2) = x^3 - 4x^2 + 5x - 2
        let p: Vec<Fe> = [-2, 5, -4, 1].iter().map(|&c| t.from_int(c)).collect();
        let mut r = roots_with_multiplicity(&p, &t);
        r.sort();
        assert_eq!(r, vec![Fe::ONE, Fe::ONE, t.from_int(2)]);
    }

    #[test]
    fn cuspidal_values() {
        let t = build_tower(5, 1).unwrap();
        let ctx = CharacterContext::new(&t).unwrap();
        let c = ctx.cuspidal_char(2).unwrap();
        assert_eq!(c.brauer.values[0], t.cyclo().from_int(4));
        assert!(ctx.cuspidal_char(6).is_err());
    }

    #[test]
    fn bareiss_small() {
        let a: Vec<Vec<BigInt>> = [[2, 1], [1, 3]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let inv = bareiss_inverse(&a).unwrap();
        assert_eq!(inv.det, BigInt::from(5));
        assert_eq!(inv.adj[0][0], BigInt::from(3));
        assert_eq!(inv.adj[0][1], BigInt::from(-1));
    }

    #[test]
    fn v5_over_f5_decomposes() {
        let t = build_tower(5, 1).unwrap();
        let ctx = CharacterContext::new(&t).unwrap();
        let inv = irreducible_inventory(&ctx).unwrap();
        let x = decompose_virtual(&inv, &ctx.brauer_char_vk(5).unwrap()).unwrap();
        let d = describe(&inv, &x);
        assert_eq!(
            d.coefficients,
            vec![
                ("e^0*V1".to_string(), "1".to_string()),
                ("e^1*V3".to_string(), "1".to_string())
            ]
        );
        let zero =
            decompose_virtual(&inv, &ClassFunction::zero(t.cyclo(), ctx.classes.len())).unwrap();
        assert!(zero.iter().all(|c| c.is_zero()));
        let st = ctx.vk_virtual(4).sub(&ctx.vk_virtual(0));
        assert!(!describe(&inv, &decompose_virtual(&inv, &st).unwrap()).positive);
    }

    #[test]
    fn module_characters_match_formula() {
        let t = build_tower(5, 1).unwrap();
        let ctx = CharacterContext::new(&t).unwrap();
        for k in 0..=8 {
            let v = GModule::sym_power(&t, k, Level::Base).unwrap();
            assert_eq!(
                ctx.brauer_char_of_module(&v).unwrap(),
                ctx.brauer_char_vk(k).unwrap(),
                "k = {k}"
            );
        }
    }

    #[test]
    fn k0_small() {
        let t = build_tower(5, 1).unwrap();
        let ctx = CharacterContext::new(&t).unwrap();
        for r in check_k0_identities(&ctx, -6..=12).unwrap() {
            assert!(r.periodicity, "{r:?}");
            assert_ne!(r.cuspidal_difference, Some(false), "{r:?}");
            assert_ne!(r.quotient_character, Some(false), "{r:?}");
        }
    }
}
