//! The tower `F_p ⊂ F_q ⊂ F_{q^2}` with a fixed primitive element, discrete
//! logarithms, Teichmüller lifts and the matrix embedding of `F_{q^2}`.
//!
//! Every element lives in `F_{q^2} = F_p[x]/(f)` and is encoded as the integer
//! `sum c_i p^i` of its coefficient vector. `F_q` is the subfield fixed by
//! `x -> x^q`.

mod cyclo;

use std::ops::Deref;
use std::sync::{Arc, OnceLock};

pub use cyclo::{binomial, binomial_mod, cyclotomic_polynomial, euler_phi, CycloInt, CycloRing};

use crate::error::{Error, Result};

/// Largest `q` accepted for plain field arithmetic.
pub const FIELD_BOUND: u64 = 49;
/// Largest `q` accepted by the verification suites.
pub const SUITE_BOUND: u64 = 13;

/// An element of `F_{q^2}`, encoded by its `F_p` coefficients in base `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug)]
pub struct TowerData {
    p: u32,
    n: u32,
    q: u32,
    q2: u32,
    /// `q^2 - 1`
    order: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u16>>,
    base: Vec<Fe>,
    cyclo: OnceLock<CycloRing>,
}

/// Shared handle to a constructed tower. Cheap to clone.
#[derive(Clone, Debug)]
pub struct FieldTower(Arc<TowerData>);

impl Deref for FieldTower {
    type Target = TowerData;
    fn deref(&self) -> &TowerData {
        &self.0
    }
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.p == other.p && self.n == other.n)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `(p, n)` with `q = p^n`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut n = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        n += 1;
    }
    (rest == 1).then_some((p as u32, n))
}

pub fn build_tower(p: u32, n: u32) -> Result<FieldTower> {
    build_tower_bounded(p, n, FIELD_BOUND)
}

/// Builds the tower for `q = p^n`, rejecting `q > bound`.
///
/// The defining polynomial of `F_{q^2}` over `F_p` is the first monic
/// polynomial of degree `2n`, scanning coefficient tuples `(c_0, c_1, ...)`
/// lexicographically with `c_0` most significant, that is irreducible and whose
/// root generates the multiplicative group.
pub fn build_tower_bounded(p: u32, n: u32, bound: u64) -> Result<FieldTower> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if n == 0 {
        return Err(Error::OutOfRange("n must be positive".into()));
    }
    let q = (p as u64)
        .checked_pow(n)
        .ok_or(Error::BoundExceeded { q: u64::MAX, bound })?;
    if q > bound {
        return Err(Error::BoundExceeded { q, bound });
    }
    let q = q as u32;
    let q2 = q * q;
    let order = q2 - 1;
    let degree = 2 * n;
    let count = q2 as u64; // p^degree candidate tuples
    for idx in 0..count {
        let mut coeffs = vec![0u32; degree as usize + 1];
        let mut rest = idx;
        for j in (0..degree as usize).rev() {
            coeffs[j] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[degree as usize] = 1;
        if coeffs[0] == 0 || !poly::is_irreducible(&coeffs, p) {
            continue;
        }
        if let Some(exp) = primitive_powers(&coeffs, p, order) {
            return Ok(assemble(p, n, coeffs, exp));
        }
    }
    Err(Error::NoGenerator { p, degree })
}

/// All monic irreducible polynomials of the given degree over `F_p`.
pub fn monic_irreducibles(p: u32, degree: u32) -> Vec<Vec<u32>> {
    let count = (p as u64).pow(degree);
    (0..count)
        .filter_map(|idx| {
            let mut coeffs = vec![0u32; degree as usize + 1];
            let mut rest = idx;
            for c in coeffs.iter_mut().take(degree as usize) {
                *c = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            coeffs[degree as usize] = 1;
            poly::is_irreducible(&coeffs, p).then_some(coeffs)
        })
        .collect()
}

/// Encoded powers `x^0, ..., x^(order-1)` when `x` has exact order `order`.
fn primitive_powers(modulus: &[u32], p: u32, order: u32) -> Option<Vec<u32>> {
    let d = modulus.len() - 1;
    let mut seen = vec![false; order as usize + 1];
    let mut cur = vec![0u32; d];
    cur[0] = 1;
    let mut exp = Vec::with_capacity(order as usize);
    for i in 0..order {
        let code = encode(&cur, p);
        if seen[code as usize] || (i > 0 && code == 1) {
            return None;
        }
        seen[code as usize] = true;
        exp.push(code);
        let lead = cur[d - 1];
        for j in (1..d).rev() {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        for j in 0..d {
            cur[j] = (cur[j] + (p - lead) * modulus[j] % p) % p;
        }
    }
    (encode(&cur, p) == 1).then_some(exp)
}

fn encode(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn decode(mut code: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for c in out.iter_mut() {
        *c = code % p;
        code /= p;
    }
    out
}

fn add_digits(a: u32, b: u32, p: u32, len: usize) -> u32 {
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut place = 1;
    for _ in 0..len {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

fn assemble(p: u32, n: u32, modulus: Vec<u32>, exp: Vec<u32>) -> FieldTower {
    let q = p.pow(n);
    let q2 = q * q;
    let order = q2 - 1;
    let len = 2 * n as usize;
    let mut log = vec![u32::MAX; q2 as usize];
    for (i, &c) in exp.iter().enumerate() {
        log[c as usize] = i as u32;
    }
    let neg: Vec<u32> = (0..q2)
        .map(|a| {
            let digits = decode(a, p, len);
            encode(&digits.iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p)
        })
        .collect();
    let add_table = (q2 <= 1024).then(|| {
        let mut t = vec![0u16; (q2 * q2) as usize];
        for a in 0..q2 {
            for b in 0..q2 {
                t[(a * q2 + b) as usize] = add_digits(a, b, p, len) as u16;
            }
        }
        t
    });
    // F_q^* = <g^(q+1)>
    let mut base: Vec<Fe> = (0..q - 1)
        .map(|j| Fe(exp[((j * (q + 1)) % order) as usize]))
        .collect();
    base.push(Fe::ZERO);
    base.sort();
    FieldTower(Arc::new(TowerData {
        p,
        n,
        q,
        q2,
        order,
        modulus,
        exp,
        log,
        neg,
        add_table,
        base,
        cyclo: OnceLock::new(),
    }))
}

impl TowerData {
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn q2(&self) -> u32 {
        self.q2
    }
    /// Order `q^2 - 1` of the multiplicative group of `F_{q^2}`.
    pub fn order(&self) -> u32 {
        self.order
    }
    /// Monic defining polynomial of `F_{q^2}` over `F_p`, low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn gen(&self) -> Fe {
        Fe(self.exp[1 % self.order as usize])
    }
    /// Generator `g^(q+1)` of `F_q^*`.
    pub fn eps(&self) -> Fe {
        self.exp_g((self.q + 1) as i64)
    }

    /// `g^e`.
    pub fn exp_g(&self, e: i64) -> Fe {
        Fe(self.exp[e.rem_euclid(self.order as i64) as usize])
    }

    pub fn dlog(&self, x: Fe) -> Result<u32> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.log[x.0 as usize])
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        match &self.add_table {
            Some(t) => Fe(t[(a.0 * self.q2 + b.0) as usize] as u32),
            None => Fe(add_digits(a.0, b.0, self.p, 2 * self.n as usize)),
        }
    }
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.0 as usize])
    }
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.is_zero() || b.is_zero() {
            return Fe::ZERO;
        }
        let e = self.log[a.0 as usize] + self.log[b.0 as usize];
        Fe(self.exp[(e % self.order) as usize])
    }
    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(!a.is_zero(), "inverse of zero");
        let e = self.log[a.0 as usize];
        Fe(self.exp[((self.order - e) % self.order) as usize])
    }
    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }
    /// `a^e`, with `0^0 = 1`; negative exponents require `a != 0`.
    pub fn pow(&self, a: Fe, e: i64) -> Fe {
        if a.is_zero() {
            assert!(e >= 0, "negative power of zero");
            return if e == 0 { Fe::ONE } else { Fe::ZERO };
        }
        let l = self.log[a.0 as usize] as i64;
        self.exp_g(l * e.rem_euclid(self.order as i64))
    }
    /// Image of an integer in the prime field.
    pub fn from_int(&self, k: i64) -> Fe {
        Fe(k.rem_euclid(self.p as i64) as u32)
    }
    /// `x^(p^i)`.
    pub fn frob(&self, x: Fe, i: u32) -> Fe {
        self.pow(x, (self.p as i64).pow(i))
    }
    pub fn in_base(&self, x: Fe) -> bool {
        self.pow(x, self.q as i64) == x
    }
    pub fn in_prime_field(&self, x: Fe) -> bool {
        x.0 < self.p
    }

    /// Elements of `F_q` sorted by encoding (so `0` comes first).
    pub fn base_elements(&self) -> &[Fe] {
        &self.base
    }
    pub fn base_units(&self) -> impl Iterator<Item = Fe> + '_ {
        self.base.iter().copied().filter(|x| !x.is_zero())
    }
    pub fn all_elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q2).map(Fe)
    }
    pub fn all_units(&self) -> impl Iterator<Item = Fe> {
        (1..self.q2).map(Fe)
    }
    /// `1, eps, ..., eps^(n-1)`: an `F_p`-basis of `F_q`.
    pub fn base_basis(&self) -> Vec<Fe> {
        (0..self.n as i64)
            .map(|i| self.pow(self.eps(), i))
            .collect()
    }

    pub fn coeffs(&self, x: Fe) -> Vec<u32> {
        decode(x.0, self.p, 2 * self.n as usize)
    }
    pub fn from_coeffs(&self, c: &[u32]) -> Fe {
        let mut digits = vec![0u32; 2 * self.n as usize];
        for (d, &v) in digits.iter_mut().zip(c) {
            *d = v % self.p;
        }
        Fe(encode(&digits, self.p))
    }

    /// Square root of `eps` outside `F_q`: the first `g^j` with `g^(2j) = eps`.
    pub fn sqrt_eps(&self) -> Result<Fe> {
        if self.p == 2 {
            return Err(Error::EvenCharacteristic(
                "eps has no square root outside F_q",
            ));
        }
        let eps = self.eps();
        (0..self.order as i64)
            .map(|j| self.exp_g(j))
            .find(|&s| self.mul(s, s) == eps)
            .ok_or_else(|| Error::Internal("eps has no square root".into()))
    }

    /// `(x, y)` in `F_q` with `c = x + y * sqrt(eps)`.
    pub fn split_quadratic(&self, c: Fe) -> Result<(Fe, Fe)> {
        let s = self.sqrt_eps()?;
        let cq = self.pow(c, self.q as i64);
        let two_inv = self.inv(self.from_int(2));
        let x = self.mul(self.add(c, cq), two_inv);
        let y = self.div(self.mul(self.sub(c, cq), two_inv), s);
        Ok((x, y))
    }

    /// The embedding `x + y sqrt(eps) -> [[x, y eps], [y, x]]` into 2x2 matrices over `F_q`.
    pub fn iota(&self, c: Fe) -> Result<[[Fe; 2]; 2]> {
        let (x, y) = self.split_quadratic(c)?;
        Ok([[x, self.mul(y, self.eps())], [y, x]])
    }

    /// The norm `c^(q+1)`.
    pub fn norm(&self, c: Fe) -> Fe {
        self.pow(c, (self.q + 1) as i64)
    }

    pub fn cyclo(&self) -> &CycloRing {
        self.cyclo.get_or_init(|| CycloRing::new(self.order as u64))
    }

    /// Teichmüller lift `z^dlog(x)` into `Z[z]`, `z` a primitive `(q^2-1)`-th root of unity.
    pub fn teichmuller(&self, x: Fe) -> Result<CycloInt> {
        let e = self.dlog(x)?;
        Ok(self.cyclo().root(e as i64))
    }

    /// Coefficient vector of an element, rendered for reports.
    pub fn render(&self, x: Fe) -> Vec<u32> {
        self.coeffs(x)
    }
}

impl FieldTower {
    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, x: Fe) -> Result<u32> {
        let l = self.dlog(x)? as u64;
        let m = self.order as u64;
        Ok((m / gcd(l, m)) as u32)
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomial helpers over `F_p` (coefficient vectors, low degree first).
mod poly {
    fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.len() > 1 && *a.last().unwrap() == 0 {
            a.pop();
        }
        if a.is_empty() {
            a.push(0);
        }
        a
    }

    fn is_zero(a: &[u32]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64 % p as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let m = trim(m.to_vec());
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm && !is_zero(&r) {
            let dr = r.len() - 1;
            let c = r[dr] * lead_inv % p;
            for j in 0..=dm {
                let idx = dr - dm + j;
                r[idx] = (r[idx] + p - c * m[j] % p) % p;
            }
            r = trim(r);
            if dr == 0 {
                break;
            }
        }
        r
    }

    fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut out = vec![0u32; a.len() + b.len()];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, m, p)
    }

    fn pow_x_mod(e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut base = rem(&[0, 1], m, p);
        let mut acc = vec![1u32];
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, m, p);
            }
            base = mul_mod(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    fn gcd(a: Vec<u32>, b: Vec<u32>, p: u32) -> Vec<u32> {
        let (mut a, mut b) = (trim(a), trim(b));
        while !is_zero(&b) {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// `f` irreducible iff it has no factor of degree `d <= deg f / 2`,
    /// i.e. `gcd(f, x^(p^d) - x) = 1` for those `d`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let f = trim(f.to_vec());
        let deg = f.len() - 1;
        if deg == 0 {
            return false;
        }
        let mut pk = 1u64;
        for _ in 1..=deg / 2 {
            pk *= p as u64;
            let mut h = pow_x_mod(pk, &f, p);
            if h.len() < 2 {
                h.resize(2, 0);
            }
            h[1] = (h[1] + p - 1) % p;
            let g = gcd(f.clone(), h, p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tower_for_three() {
        let t = build_tower(3, 1).unwrap();
        assert_eq!((t.q(), t.q2(), t.order()), (3, 9, 8));
        assert_eq!(t.modulus().len(), 3);
        assert_eq!(t.mult_order(t.gen()).unwrap(), 8);
        // oracle: among the three monic irreducible quadratics, the ones with
        // a primitive root are exactly those whose root has order 8
        let irr = monic_irreducibles(3, 2);
        assert_eq!(irr.len(), 3);
        assert!(irr.contains(&t.modulus().to_vec()));
    }

    #[test]
    fn irreducible_counts() {
        assert_eq!(monic_irreducibles(5, 2).len(), 10);
        assert_eq!(monic_irreducibles(2, 4).len(), 3);
        assert_eq!(monic_irreducibles(3, 4).len(), 18);
    }

    #[test]
    fn epsilon_has_order_q_minus_one() {
        for (p, n) in [
            (2, 1),
            (3, 1),
            (3, 2),
            (5, 1),
            (7, 1),
            (2, 3),
            (13, 1),
            (7, 2),
        ] {
            let t = build_tower(p, n).unwrap();
            let q = t.q();
            assert_eq!(t.mult_order(t.eps()).unwrap(), q - 1, "q = {q}");
            assert!(t.in_base(t.eps()));
            assert_eq!(t.base_elements().len(), q as usize);
            for ell in prime_factors(t.order() as u64) {
                assert_ne!(t.exp_g((t.order() as u64 / ell) as i64), Fe::ONE);
            }
        }
    }

    #[test]
    fn bounds_and_errors() {
        assert_eq!(build_tower(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(
            build_tower(53, 1).unwrap_err(),
            Error::BoundExceeded { .. }
        ));
        assert!(build_tower_bounded(11, 1, SUITE_BOUND).is_ok());
        let t = build_tower(5, 1).unwrap();
        assert_eq!(t.dlog(Fe::ZERO).unwrap_err(), Error::ZeroElement);
        assert!(t.teichmuller(Fe::ZERO).is_err());
        assert!(build_tower(2, 2).unwrap().iota(Fe::ONE).is_err());
    }

    #[test]
    fn dlog_basics() {
        let t = build_tower(5, 1).unwrap();
        assert_eq!(t.dlog(Fe::ONE).unwrap(), 0);
        assert_eq!(t.dlog(t.gen()).unwrap(), 1);
        let x = t.mul(t.exp_g(5), t.exp_g(7));
        assert_eq!(t.dlog(x).unwrap(), 12);
    }

    #[test]
    fn teichmuller_basics() {
        let t = build_tower(5, 1).unwrap();
        assert_eq!(t.teichmuller(Fe::ONE).unwrap(), t.cyclo().one());
        assert_eq!(t.teichmuller(t.gen()).unwrap(), t.cyclo().root(1));
    }

    #[test]
    fn teichmuller_injective_small() {
        for (p, n) in [(3, 1), (5, 1), (7, 1), (2, 2)] {
            let t = build_tower(p, n).unwrap();
            let mut lifts: Vec<CycloInt> =
                t.all_units().map(|x| t.teichmuller(x).unwrap()).collect();
            let total = lifts.len();
            lifts.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
            lifts.dedup();
            assert_eq!(lifts.len(), total);
        }
    }

    #[test]
    fn iota_of_sqrt_eps() {
        let t = build_tower(5, 1).unwrap();
        let s = t.sqrt_eps().unwrap();
        assert!(!t.in_base(s));
        assert_eq!(
            t.iota(s).unwrap(),
            [[Fe::ZERO, t.eps()], [Fe::ONE, Fe::ZERO]]
        );
        assert_eq!(
            t.iota(Fe::ONE).unwrap(),
            [[Fe::ONE, Fe::ZERO], [Fe::ZERO, Fe::ONE]]
        );
    }

    #[test]
    fn subfield_membership() {
        let t = build_tower(3, 2).unwrap();
        let count = t.all_elements().filter(|&x| t.in_base(x)).count();
        assert_eq!(count, 9);
        for &x in t.base_elements() {
            assert_eq!(t.frob(x, 2), x);
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(13), Some((13, 1)));
    }
}
