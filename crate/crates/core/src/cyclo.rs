//! Exact arithmetic in the ring of cyclotomic integers `Z[ζ]`, `ζ = e^{iπ/5}`.
//!
//! A value is stored as `a0 + a1 ζ + a2 ζ² + a3 ζ³`, always reduced modulo
//! `Φ10(x) = x⁴ − x³ + x² − x + 1`, so two values are equal exactly when their
//! coefficient tuples are equal. Every tile vertex and the golden ratio live
//! here; floating point only appears in [`Cyclo::to_complex`].

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Coefficient ring for [`Cyclo`]. Blanket-implemented for every signed
/// integer type that num-traits knows about (`i64`, `i128`, `BigInt`, ...).
pub trait Coeff:
    Clone
    + Ord
    + Hash
    + fmt::Debug
    + fmt::Display
    + Signed
    + ToPrimitive
    + FromPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> Coeff for T where
    T: Clone
        + Ord
        + Hash
        + fmt::Debug
        + fmt::Display
        + Signed
        + ToPrimitive
        + FromPrimitive
        + Send
        + Sync
        + 'static
{
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cyclo<T> {
    c: [T; 4],
}

/// Planar points are identified with complex numbers in `Z[ζ]`.
pub type Point<T> = Cyclo<T>;

fn int<T: Coeff>(v: i64) -> T {
    T::from_i64(v).expect("small integer fits every coefficient type")
}

impl<T: Coeff> Cyclo<T> {
    pub fn new(c: [T; 4]) -> Self {
        Cyclo { c }
    }

    pub fn from_i64s(c: [i64; 4]) -> Self {
        Cyclo::new(c.map(int))
    }

    pub fn from_int(a: T) -> Self {
        Cyclo::new([a, T::zero(), T::zero(), T::zero()])
    }

    pub fn coeffs(&self) -> &[T; 4] {
        &self.c
    }

    pub fn zeta() -> Self {
        Cyclo::from_i64s([0, 1, 0, 0])
    }

    /// `ζ^k` for any integer `k` (taken mod 10).
    pub fn zeta_pow(k: i64) -> Self {
        let k = k.rem_euclid(10);
        let (sign, e) = if k >= 5 { (-1, k - 5) } else { (1, k) };
        // ζ⁴ = ζ³ − ζ² + ζ − 1
        let base = match e {
            0 => [1, 0, 0, 0],
            1 => [0, 1, 0, 0],
            2 => [0, 0, 1, 0],
            3 => [0, 0, 0, 1],
            _ => [-1, 1, -1, 1],
        };
        Cyclo::from_i64s(base.map(|x| x * sign))
    }

    /// The golden ratio `φ = ζ + ζ⁻¹`.
    pub fn golden() -> Self {
        Cyclo::from_i64s([1, 0, 1, -1])
    }

    /// `1/φ = φ − 1`.
    pub fn golden_inv() -> Self {
        Cyclo::from_i64s([0, 0, 1, -1])
    }

    /// Reduce an arbitrary polynomial in `ζ` (lowest degree first) to canonical form.
    pub fn reduce_poly(poly: &[T]) -> Self {
        let mut p: Vec<T> = poly.to_vec();
        while p.len() > 4 {
            let top = p.pop().expect("len > 4");
            let d = p.len(); // exponent of the popped term
            if top.is_zero() {
                continue;
            }
            // x^d = x^{d-4} (x³ − x² + x − 1)
            let b = d - 4;
            p[b] = p[b].clone() - top.clone();
            p[b + 1] = p[b + 1].clone() + top.clone();
            p[b + 2] = p[b + 2].clone() - top.clone();
            p[b + 3] = p[b + 3].clone() + top;
        }
        p.resize(4, T::zero());
        let mut it = p.into_iter();
        Cyclo::new([
            it.next().expect("4"),
            it.next().expect("4"),
            it.next().expect("4"),
            it.next().expect("4"),
        ])
    }

    /// Complex conjugation, i.e. reflection in the real axis.
    pub fn conj(&self) -> Self {
        let [a0, a1, a2, a3] = &self.c;
        // ζ⁻¹ = 1 − ζ + ζ² − ζ³, ζ⁻² = −ζ³, ζ⁻³ = −ζ²
        Cyclo::new([
            a0.clone() + a1.clone(),
            -a1.clone(),
            a1.clone() - a3.clone(),
            -a1.clone() - a2.clone(),
        ])
    }

    /// Multiply by `ζ^k`.
    pub fn rotate(&self, k: i64) -> Self {
        match k.rem_euclid(10) {
            0 => self.clone(),
            5 => -self.clone(),
            k => self * &Cyclo::zeta_pow(k),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        Cyclo::new(self.c.clone().map(|x| x * s.clone()))
    }

    /// `|z|²` as an element of `Z[ζ]` (always real).
    pub fn norm_sqr(&self) -> Self {
        self * &self.conj()
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Writes a real value as `a + bφ`; `None` if the value is not real.
    pub fn as_zphi(&self) -> Option<(T, T)> {
        let [c0, c1, c2, c3] = &self.c;
        // a + bφ = (a + b, 0, b, −b)
        if c1.is_zero() && *c3 == -c2.clone() {
            Some((c0.clone() - c2.clone(), c2.clone()))
        } else {
            None
        }
    }

    pub fn from_zphi(a: T, b: T) -> Self {
        Cyclo::new([a + b.clone(), T::zero(), b.clone(), -b])
    }

    /// Sign of a real value (`None` if not real). Exact: no floating point.
    pub fn real_signum(&self) -> Option<i8> {
        let (a, b) = self.as_zphi()?;
        // a + bφ = (u + v√5)/2 with u = 2a + b, v = b
        let u = a.clone() + a + b.clone();
        let v = b;
        Some(sign_u_plus_v_sqrt5(&u, &v))
    }

    /// Numeric embedding `ζ ↦ e^{iπ/5}`. Advisory only: never used for equality.
    pub fn to_complex<F: Float + FloatConst>(&self) -> Complex<F> {
        let mut acc = Complex::new(F::zero(), F::zero());
        let step = F::PI() / F::from(5).expect("5");
        for (k, a) in self.c.iter().enumerate() {
            let a = F::from(a.clone()).unwrap_or_else(F::nan);
            let ang = step * F::from(k).expect("k");
            acc = acc + Complex::new(ang.cos(), ang.sin()) * a;
        }
        acc
    }

    pub fn to_f64(&self) -> (f64, f64) {
        let z = self.to_complex::<f64>();
        (z.re, z.im)
    }

    pub fn to_i64s(&self) -> Option<[i64; 4]> {
        Some([
            self.c[0].to_i64()?,
            self.c[1].to_i64()?,
            self.c[2].to_i64()?,
            self.c[3].to_i64()?,
        ])
    }

    /// Convert to another coefficient type; `None` on overflow.
    pub fn convert<U: Coeff>(&self) -> Option<Cyclo<U>> {
        let c = self.to_i64s()?;
        Some(Cyclo::new([
            U::from_i64(c[0])?,
            U::from_i64(c[1])?,
            U::from_i64(c[2])?,
            U::from_i64(c[3])?,
        ]))
    }
}

fn sign_u_plus_v_sqrt5<T: Coeff>(u: &T, v: &T) -> i8 {
    let su = sgn(u);
    let sv = sgn(v);
    if su >= 0 && sv >= 0 {
        return if su == 0 && sv == 0 { 0 } else { 1 };
    }
    if su <= 0 && sv <= 0 {
        return -1;
    }
    // opposite signs: compare u² with 5v²
    let uu = u.clone() * u.clone();
    let vv = v.clone() * v.clone() * int::<T>(5);
    match uu.cmp(&vv) {
        std::cmp::Ordering::Greater => su,
        std::cmp::Ordering::Less => sv,
        std::cmp::Ordering::Equal => 0,
    }
}

fn sgn<T: Coeff>(x: &T) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn mul_raw<T: Coeff>(a: &[T; 4], b: &[T; 4]) -> Cyclo<T> {
    let mut d: [T; 7] = std::array::from_fn(|_| T::zero());
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            d[i + j] = d[i + j].clone() + x.clone() * y.clone();
        }
    }
    let [d0, d1, d2, d3, d4, d5, d6] = d;
    // ζ⁵ = −1, ζ⁶ = −ζ, ζ⁴ = ζ³ − ζ² + ζ − 1
    Cyclo::new([
        d0 - d5 - d4.clone(),
        d1 - d6 + d4.clone(),
        d2 - d4.clone(),
        d3 + d4,
    ])
}

impl<T: Coeff> Zero for Cyclo<T> {
    fn zero() -> Self {
        Cyclo::new([T::zero(), T::zero(), T::zero(), T::zero()])
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }
}

impl<T: Coeff> One for Cyclo<T> {
    fn one() -> Self {
        Cyclo::from_int(T::one())
    }
}

impl<'a, T: Coeff> Add<&'a Cyclo<T>> for &'a Cyclo<T> {
    type Output = Cyclo<T>;
    fn add(self, o: &Cyclo<T>) -> Cyclo<T> {
        Cyclo::new(std::array::from_fn(|i| self.c[i].clone() + o.c[i].clone()))
    }
}

impl<'a, T: Coeff> Sub<&'a Cyclo<T>> for &'a Cyclo<T> {
    type Output = Cyclo<T>;
    fn sub(self, o: &Cyclo<T>) -> Cyclo<T> {
        Cyclo::new(std::array::from_fn(|i| self.c[i].clone() - o.c[i].clone()))
    }
}

impl<'a, T: Coeff> Mul<&'a Cyclo<T>> for &'a Cyclo<T> {
    type Output = Cyclo<T>;
    fn mul(self, o: &Cyclo<T>) -> Cyclo<T> {
        mul_raw(&self.c, &o.c)
    }
}

impl<T: Coeff> Add for Cyclo<T> {
    type Output = Cyclo<T>;
    fn add(self, o: Cyclo<T>) -> Cyclo<T> {
        &self + &o
    }
}

impl<T: Coeff> Sub for Cyclo<T> {
    type Output = Cyclo<T>;
    fn sub(self, o: Cyclo<T>) -> Cyclo<T> {
        &self - &o
    }
}

impl<T: Coeff> Mul for Cyclo<T> {
    type Output = Cyclo<T>;
    fn mul(self, o: Cyclo<T>) -> Cyclo<T> {
        &self * &o
    }
}

impl<T: Coeff> AddAssign<&Cyclo<T>> for Cyclo<T> {
    fn add_assign(&mut self, o: &Cyclo<T>) {
        for (a, b) in self.c.iter_mut().zip(o.c.iter()) {
            *a = a.clone() + b.clone();
        }
    }
}

impl<T: Coeff> SubAssign<&Cyclo<T>> for Cyclo<T> {
    fn sub_assign(&mut self, o: &Cyclo<T>) {
        for (a, b) in self.c.iter_mut().zip(o.c.iter()) {
            *a = a.clone() - b.clone();
        }
    }
}

impl<T: Coeff> Neg for Cyclo<T> {
    type Output = Cyclo<T>;
    fn neg(self) -> Cyclo<T> {
        Cyclo::new(self.c.map(|x| -x))
    }
}

impl<T: Coeff> fmt::Debug for Cyclo<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.c;
        write!(f, "({a},{b},{c},{d})")
    }
}

impl<T: Coeff> fmt::Display for Cyclo<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

// JSON form: a 4-element integer array.
impl<T: Coeff> Serialize for Cyclo<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::Error as _;
        let c = self
            .to_i64s()
            .ok_or_else(|| S::Error::custom("coefficient does not fit in i64"))?;
        c.serialize(s)
    }
}

impl<'de, T: Coeff> Deserialize<'de> for Cyclo<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let c = <[i64; 4]>::deserialize(d)?;
        let mut out: [T; 4] = std::array::from_fn(|_| T::zero());
        for (o, v) in out.iter_mut().zip(c) {
            *o = T::from_i64(v).ok_or_else(|| D::Error::custom("coefficient out of range"))?;
        }
        Ok(Cyclo::new(out))
    }
}

/// Rotation by a multiple of π/5, optional reflection in the real axis,
/// then translation: `p ↦ t + ζ^k · (conj? p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Isometry<T> {
    pub rotation: u8,
    pub reflect: bool,
    pub translation: Point<T>,
}

impl<T: Coeff> fmt::Debug for Isometry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Isometry(rot={}, reflect={}, t={:?})",
            self.rotation, self.reflect, self.translation
        )
    }
}

impl<T: Coeff> Isometry<T> {
    pub fn identity() -> Self {
        Isometry {
            rotation: 0,
            reflect: false,
            translation: Cyclo::zero(),
        }
    }

    pub fn linear(rotation: u8, reflect: bool) -> Self {
        Isometry {
            rotation: rotation % 10,
            reflect,
            translation: Cyclo::zero(),
        }
    }

    pub fn translation(t: Point<T>) -> Self {
        Isometry {
            rotation: 0,
            reflect: false,
            translation: t,
        }
    }

    /// The 20 elements of the dihedral point group, without translation.
    pub fn point_group() -> impl Iterator<Item = Isometry<T>> {
        (0..10u8).flat_map(|k| [false, true].into_iter().map(move |r| Isometry::linear(k, r)))
    }

    fn linear_part(&self, p: &Point<T>) -> Point<T> {
        let q = if self.reflect { p.conj() } else { p.clone() };
        q.rotate(self.rotation as i64)
    }

    pub fn apply(&self, p: &Point<T>) -> Point<T> {
        &self.translation + &self.linear_part(p)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry<T>) -> Isometry<T> {
        let k2 = other.rotation as i64;
        let k = self.rotation as i64 + if self.reflect { -k2 } else { k2 };
        Isometry {
            rotation: k.rem_euclid(10) as u8,
            reflect: self.reflect ^ other.reflect,
            translation: self.apply(&other.translation),
        }
    }

    pub fn inverse(&self) -> Isometry<T> {
        let lin = if self.reflect {
            Isometry::linear(self.rotation, true)
        } else {
            Isometry::linear(((10 - self.rotation as i64) % 10) as u8, false)
        };
        let t = -lin.apply(&self.translation);
        Isometry {
            translation: t,
            ..lin
        }
    }
}
