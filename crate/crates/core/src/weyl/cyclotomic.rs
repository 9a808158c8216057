use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::linalg::solve;
use crate::scalar::format_rational;
use crate::RatMatrix;

/// Element of `Q(ζ_N)` in the power basis `1, ζ_N, …, ζ_N^{φ(N)-1}`.
///
/// Binary operations move both operands to the lcm of their orders, so the
/// order only grows as new phases appear. Equality is decided at the lcm and
/// does not depend on the order a value happens to carry.
#[derive(Clone)]
pub struct CyclotomicScalar {
    order: u64,
    coeffs: Vec<BigRational>,
}

fn cyclotomic_polynomial(n: u64) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("cache").get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = -BigInt::one();
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = divide_exact(&p, &cyclotomic_polynomial(d));
        }
    }
    let p = Arc::new(p);
    cache.lock().expect("cache").insert(n, p.clone());
    p
}

/// Quotient of `a` by the monic `b`, assuming the division is exact.
fn divide_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![BigInt::zero(); rem.len() - db];
    for i in (0..q.len()).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    q
}

fn totient(n: u64) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

/// Reduces a polynomial in `ζ_n` modulo `Φ_n`.
fn reduce(n: u64, mut poly: Vec<BigRational>) -> Vec<BigRational> {
    let phi = cyclotomic_polynomial(n);
    let d = phi.len() - 1;
    for i in (d..poly.len()).rev() {
        let c = std::mem::take(&mut poly[i]);
        if c.is_zero() {
            continue;
        }
        for (j, pj) in phi.iter().enumerate().take(d) {
            if !pj.is_zero() {
                poly[i - d + j] -= &c * BigRational::from_integer(pj.clone());
            }
        }
    }
    poly.resize(d, BigRational::zero());
    poly
}

impl CyclotomicScalar {
    pub fn from_rational(r: BigRational) -> Self {
        CyclotomicScalar {
            order: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    /// `ζ_n^k = e^{2πik/n}`.
    pub fn root_of_unity(k: i64, n: u64) -> Self {
        assert!(n > 0, "order must be positive");
        let e = k.rem_euclid(n as i64) as usize;
        let mut poly = vec![BigRational::zero(); n as usize];
        poly[e] = BigRational::one();
        CyclotomicScalar {
            order: n,
            coeffs: reduce(n, poly),
        }
    }

    pub fn i() -> Self {
        Self::root_of_unity(1, 4)
    }

    /// `e^{-iπr}`, a root of unity of order dividing `2·denominator(r)`.
    pub fn phase(r: &BigRational) -> Self {
        let q = r.denom().to_u64().expect("phase denominator fits in u64");
        let p = (r.numer() % BigInt::from(2 * q))
            .to_i64()
            .expect("reduced numerator");
        Self::root_of_unity(-p, 2 * q)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Same value in `Q(ζ_m)`, `order | m`.
    pub fn embed(&self, m: u64) -> Self {
        assert!(
            m.is_multiple_of(self.order),
            "cannot embed order {} into {m}",
            self.order
        );
        if m == self.order {
            return self.clone();
        }
        let step = (m / self.order) as usize;
        let mut poly = vec![BigRational::zero(); m as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            poly[j * step] = c.clone();
        }
        CyclotomicScalar {
            order: m,
            coeffs: reduce(m, poly),
        }
    }

    fn align(&self, other: &Self) -> (Self, Self) {
        let m = self.order.lcm(&other.order);
        (self.embed(m), other.embed(m))
    }

    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut poly = vec![BigRational::zero(); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            poly[(n - j) % n] += c;
        }
        CyclotomicScalar {
            order: self.order,
            coeffs: reduce(self.order, poly),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    pub fn abs_squared(&self) -> Self {
        self.clone() * self.conj()
    }

    /// `|α|` when it is rational.
    pub fn modulus(&self) -> Option<BigRational> {
        rational_sqrt(&self.abs_squared().to_rational()?)
    }

    /// `|α|` if rational, otherwise `Σ|c_j|` over the power-basis
    /// coefficients of the smallest field containing `α` (triangle
    /// inequality). The flag tells which.
    pub fn modulus_bound(&self) -> (BigRational, bool) {
        match self.modulus() {
            Some(m) => (m, true),
            None => {
                let m = self.normalized();
                (m.coeffs.iter().map(|c| c.abs()).sum(), false)
            }
        }
    }

    /// Same value in the smallest `Q(ζ_d)`, `d | order`.
    pub fn normalized(&self) -> Self {
        if self.is_rational() {
            return Self::from_rational(self.coeffs[0].clone());
        }
        let n = self.order;
        for d in (2..n).filter(|d| n.is_multiple_of(*d)) {
            let basis: Vec<Vec<BigRational>> = (0..totient(d))
                .map(|j| Self::root_of_unity(j as i64, d).embed(n).coeffs)
                .collect();
            let e = RatMatrix::from_columns(self.coeffs.len(), &basis).expect("length");
            if let Some(x) = solve(&e, &self.coeffs) {
                if e.mul_vec(&x) == self.coeffs {
                    return CyclotomicScalar {
                        order: d,
                        coeffs: x,
                    };
                }
            }
        }
        self.clone()
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let angle = 2.0 * std::f64::consts::PI * j as f64 / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle)
            })
            .sum()
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let (p, q) = (r.numer().sqrt(), r.denom().sqrt());
    (&p * &p == *r.numer() && &q * &q == *r.denom()).then(|| BigRational::new(p, q))
}

impl PartialEq for CyclotomicScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.align(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CyclotomicScalar {}

impl Add for CyclotomicScalar {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let (mut a, b) = self.align(&rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x += y;
        }
        a
    }
}

impl Sub for CyclotomicScalar {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for CyclotomicScalar {
    type Output = Self;

    fn neg(mut self) -> Self {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Mul for CyclotomicScalar {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let (a, b) = self.align(&rhs);
        if a.is_rational() || b.is_rational() {
            let (r, other) = if a.is_rational() {
                (&a.coeffs[0], &b)
            } else {
                (&b.coeffs[0], &a)
            };
            return CyclotomicScalar {
                order: other.order,
                coeffs: other.coeffs.iter().map(|c| c * r).collect(),
            };
        }
        let len = a.coeffs.len() + b.coeffs.len() - 1;
        let mut poly = vec![BigRational::zero(); len];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] += x * y;
                }
            }
        }
        CyclotomicScalar {
            order: a.order,
            coeffs: reduce(a.order, poly),
        }
    }
}

impl Zero for CyclotomicScalar {
    fn zero() -> Self {
        Self::from_integer(0)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl One for CyclotomicScalar {
    fn one() -> Self {
        Self::from_integer(1)
    }
}

impl fmt::Debug for CyclotomicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CyclotomicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.normalized();
        if let Some(r) = m.to_rational() {
            return write!(f, "{}", format_rational(&r));
        }
        let mut parts = Vec::new();
        for (j, c) in m.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = format_rational(c);
            parts.push(match j {
                0 => c,
                1 => format!("{c}·ζ{}", m.order),
                _ => format!("{c}·ζ{}^{j}", m.order),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for CyclotomicScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m = self.normalized();
        let mut st = s.serialize_struct("CyclotomicScalar", 2)?;
        st.serialize_field("order", &m.order)?;
        let coeffs: Vec<String> = m.coeffs.iter().map(format_rational).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}
