//! Exact arithmetic in `Z[x]/(Phi_M(x))`, the ring of integers of the `M`-th
//! cyclotomic field, in the power basis `1, z, ..., z^(deg-1)`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Element of `Z[z]`, stored as canonical coefficients modulo `Phi_M`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloInt {
    coeffs: Vec<BigInt>,
}

impl CycloInt {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Coefficients as machine integers, if every one fits.
    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }

    pub fn scale(&self, k: i64) -> CycloInt {
        let k = BigInt::from(k);
        CycloInt {
            coeffs: self.coeffs.iter().map(|c| c * &k).collect(),
        }
    }
}

impl fmt::Display for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Add for &CycloInt {
    type Output = CycloInt;
    fn add(self, rhs: &CycloInt) -> CycloInt {
        assert_eq!(
            self.coeffs.len(),
            rhs.coeffs.len(),
            "cyclotomic ring mismatch"
        );
        CycloInt {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CycloInt {
    type Output = CycloInt;
    fn sub(self, rhs: &CycloInt) -> CycloInt {
        assert_eq!(
            self.coeffs.len(),
            rhs.coeffs.len(),
            "cyclotomic ring mismatch"
        );
        CycloInt {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &CycloInt {
    type Output = CycloInt;
    fn neg(self) -> CycloInt {
        CycloInt {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

/// The ring `Z[x]/(Phi_M)` together with a table of reduced powers of `z`.
#[derive(Debug)]
pub struct CycloRing {
    m: u64,
    /// Monic `Phi_M`, low degree first.
    phi: Vec<BigInt>,
    /// `roots[e]` = reduced coordinates of `z^e`, `0 <= e < M`.
    roots: Vec<Vec<i64>>,
}

impl CycloRing {
    pub fn new(m: u64) -> CycloRing {
        assert!(m >= 1);
        let phi = cyclotomic_polynomial(m);
        let deg = phi.len() - 1;
        let phi_small: Vec<i64> = phi
            .iter()
            .map(|c| c.to_i64().expect("cyclotomic coefficient overflow"))
            .collect();
        let mut roots = Vec::with_capacity(m as usize);
        let mut cur = vec![0i64; deg];
        if deg > 0 {
            cur[0] = 1;
        }
        for _ in 0..m {
            roots.push(cur.clone());
            // multiply by z and reduce by the monic Phi_M
            let lead = if deg > 0 { cur[deg - 1] } else { 0 };
            for i in (1..deg).rev() {
                cur[i] = cur[i - 1];
            }
            if deg > 0 {
                cur[0] = 0;
            }
            if lead != 0 {
                for i in 0..deg {
                    cur[i] = cur[i]
                        .checked_sub(lead.checked_mul(phi_small[i]).expect("overflow"))
                        .expect("overflow");
                }
            }
        }
        CycloRing { m, phi, roots }
    }

    /// The order `M` of the root of unity `z`.
    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn cyclotomic_poly(&self) -> &[BigInt] {
        &self.phi
    }

    pub fn zero(&self) -> CycloInt {
        CycloInt {
            coeffs: vec![BigInt::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> CycloInt {
        self.root(0)
    }

    pub fn from_int(&self, k: i64) -> CycloInt {
        self.one().scale(k)
    }

    /// `z^e` for any integer exponent.
    pub fn root(&self, e: i64) -> CycloInt {
        let idx = e.rem_euclid(self.m as i64) as usize;
        CycloInt {
            coeffs: self.roots[idx].iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    /// `sum_e counts[e] * z^e`, with `counts` indexed by exponent mod `M`.
    pub fn from_exponent_counts(&self, counts: &[i64]) -> CycloInt {
        let deg = self.degree();
        let mut acc = vec![0i128; deg];
        for (e, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let r = &self.roots[e % self.m as usize];
            for i in 0..deg {
                acc[i] += c as i128 * r[i] as i128;
            }
        }
        CycloInt {
            coeffs: acc.into_iter().map(BigInt::from).collect(),
        }
    }

    /// Sum of roots of unity `z^e` over the given exponents.
    pub fn sum_of_roots<I: IntoIterator<Item = i64>>(&self, exps: I) -> CycloInt {
        let mut counts = vec![0i64; self.m as usize];
        for e in exps {
            counts[e.rem_euclid(self.m as i64) as usize] += 1;
        }
        self.from_exponent_counts(&counts)
    }

    pub fn mul(&self, a: &CycloInt, b: &CycloInt) -> CycloInt {
        let deg = self.degree();
        let mut prod = vec![BigInt::zero(); (2 * deg).max(1)];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        self.reduce(prod)
    }

    pub fn pow(&self, a: &CycloInt, mut e: u64) -> CycloInt {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Reduce an arbitrary integer polynomial (low degree first) modulo `Phi_M`.
    pub fn reduce(&self, mut poly: Vec<BigInt>) -> CycloInt {
        let deg = self.degree();
        while poly.len() > deg {
            let lead = poly.pop().unwrap();
            if lead.is_zero() {
                continue;
            }
            let shift = poly.len() - deg;
            for i in 0..deg {
                poly[shift + i] -= &lead * &self.phi[i];
            }
        }
        poly.resize(deg, BigInt::zero());
        CycloInt { coeffs: poly }
    }

    /// Evaluate `Phi_M` at `z` inside the ring; the result is zero.
    pub fn phi_at_root(&self) -> CycloInt {
        self.reduce(self.phi.clone())
    }
}

/// `Phi_m` by exact division of `x^m - 1` by `Phi_d` for all proper divisors `d`.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    let divisors: Vec<u64> = (1..=m).filter(|d| m.is_multiple_of(*d)).collect();
    let mut known: std::collections::BTreeMap<u64, Vec<BigInt>> = Default::default();
    for &d in &divisors {
        let mut num = vec![BigInt::zero(); d as usize + 1];
        num[0] = -BigInt::one();
        num[d as usize] = BigInt::one();
        for (e, phi_e) in &known {
            if d % e == 0 {
                num = exact_div(&num, phi_e);
            }
        }
        known.insert(d, num);
    }
    known.remove(&m).unwrap()
}

fn exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let qlen = rem.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for j in 0..=dd {
            rem[i + j] -= &c * &den[j];
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

/// Euler's totient by trial division.
pub fn euler_phi(mut m: u64) -> u64 {
    let mut result = m;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            while m.is_multiple_of(d) {
                m /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Exact integer binomial coefficient; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc = acc.div_floor(&BigInt::from(i + 1));
    }
    acc
}

/// `binomial(n, k) mod p` as a residue in `[0, p)`.
pub fn binomial_mod(n: i64, k: i64, p: u32) -> u32 {
    let b = binomial(n, k);
    let r = b.mod_floor(&BigInt::from(p));
    debug_assert!(!r.is_negative());
    r.to_u32().unwrap()
}
