//! Closed-form counts: hyperfactorial product formulas for each symmetry
//! class, and the ratio identities that determine them by induction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hexgrid::BoxDims;
use crate::symmetry::SymmetryClass;

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `H(n) = 0! 1! ... (n-1)!`
pub fn hyperfactorial(n: i64) -> BigInt {
    staggered_hyperfactorial(1, n)
}

/// `H_k(n) = (n-k)! (n-2k)! ...`, over terms with nonnegative argument.
pub fn staggered_hyperfactorial(k: i64, n: i64) -> BigInt {
    assert!(k >= 1, "step must be positive");
    let mut acc = BigInt::one();
    let mut m = n - k;
    while m >= 0 {
        acc *= factorial(m as u64);
        m -= k;
    }
    acc
}

/// `F_k(n) = n (n-k) (n-2k) ...`, over positive terms.
pub fn staggered_factorial(k: i64, n: i64) -> BigInt {
    assert!(k >= 1, "step must be positive");
    let mut acc = BigInt::one();
    let mut m = n;
    while m >= 1 {
        acc *= m;
        m -= k;
    }
    acc
}

fn div_exact(num: BigInt, den: BigInt, what: &'static str) -> Result<BigInt> {
    let (q, r) = num.div_rem(&den);
    if den.is_zero() || !r.is_zero() {
        return Err(Error::InexactDivision(what));
    }
    Ok(q)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaResult {
    pub class: u8,
    pub dims: BoxDims,
    #[serde(serialize_with = "ser_display")]
    pub value: BigInt,
}

fn unrestricted(a: i64, b: i64, c: i64) -> Result<BigInt> {
    let h = hyperfactorial;
    div_exact(h(a + b + c) * h(a) * h(b) * h(c), h(a + b) * h(a + c) * h(b + c), "class 1 formula")
}

/// Number of plane partitions in the box fixed by class `cls`, from the
/// product formulas. Boxes the group does not fix, and fixed boxes with no
/// fixed partition (odd volume under complementation), give zero.
pub fn n_class(cls: SymmetryClass, dims: BoxDims) -> Result<FormulaResult> {
    let value = n_value(cls, dims)?;
    Ok(FormulaResult { class: cls.id(), dims, value })
}

fn n_value(cls: SymmetryClass, dims: BoxDims) -> Result<BigInt> {
    if !cls.fixes_box(dims) {
        return Ok(BigInt::zero());
    }
    if dims.volume() == 0 {
        // Only the empty partition, fixed by everything.
        return Ok(BigInt::one());
    }
    let (a, b, c) = (dims.a as i64, dims.b as i64, dims.c as i64);
    let (h, hk, fk) = (hyperfactorial, staggered_hyperfactorial, staggered_factorial);
    let even = |n: i64| n % 2 == 0;
    match cls.id() {
        1 => unrestricted(a, b, c),
        // a = b
        2 => div_exact(hk(2, 2 * a + c + 1) * h(a) * hk(2, c), hk(2, 2 * a + 1) * h(a + c), "class 2 formula"),
        3 => div_exact(hk(3, 3 * a + 2) * h(a), h(2 * a) * fk(3, 3 * a - 2), "class 3 formula"),
        4 => div_exact(hk(2, a) * hk(6, 3 * a + 5), hk(2, 2 * a + 1) * fk(6, 3 * a - 2), "class 4 formula"),
        5 => {
            let mut sides = [a, b, c];
            // Even sides first; the formulas are symmetric in the box.
            sides.sort_by_key(|&s| (s % 2, s));
            let [x, y, z] = sides.map(|s| s / 2);
            match sides.iter().filter(|&&s| even(s)).count() {
                3 => Ok(unrestricted(x, y, z)?.pow(2)),
                2 => Ok(unrestricted(x, y, z)? * unrestricted(x, y, z + 1)?),
                1 => Ok(unrestricted(y + 1, z, x)? * unrestricted(y, z + 1, x)?),
                _ => Ok(BigInt::zero()),
            }
        }
        6 => {
            if !even(c) {
                return Ok(BigInt::zero());
            }
            let bb = c / 2;
            div_exact(hk(2, 2 * bb + 1) * hk(2, 2 * bb + 2 * a) * h(a), h(2 * bb + a) * hk(2, 2 * a), "class 6 formula")
        }
        7 => {
            if !even(c) {
                return Ok(BigInt::zero());
            }
            let (half, bb) = (a / 2, c / 2);
            if even(a) {
                unrestricted(half, half, bb)
            } else {
                unrestricted(half, half + 1, bb)
            }
        }
        8..=10 => {
            if !even(a) {
                return Ok(BigInt::zero());
            }
            let s = a / 2;
            let cyclic_sc = || div_exact(hk(3, 3 * s + 1) * h(s), h(2 * s), "class 10 formula");
            match cls.id() {
                8 => div_exact(
                    fk(3, 3 * s - 2) * hk(6, 6 * s) * hk(2, 2 * s),
                    hk(4, 4 * s + 1) * hk(4, 4 * s),
                    "class 8 formula",
                ),
                9 => Ok(cyclic_sc()?.pow(2)),
                _ => cyclic_sc(),
            }
        }
        _ => unreachable!("class ids are 1..=10"),
    }
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// Unrestricted counts: `P(a+1, b+1, c-1) / P(a, b, c) = C(a+b+c, c-1) / C(a+b, a)`, `c >= 1`.
pub fn unrestricted_ratio(a: i64, b: i64, c: i64) -> BigRational {
    ratio(binomial(a + b + c, c - 1), binomial(a + b, a))
}

/// Cyclically symmetric counts in cubes: `C(a+1) / C(a) = (3a+2)/a * C(3a, a-1) / C(2a, a)`, `a >= 1`.
pub fn cyclic_ratio(a: i64) -> BigRational {
    ratio(BigInt::from(3 * a + 2) * binomial(3 * a, a - 1), BigInt::from(a) * binomial(2 * a, a))
}

/// Cyclically symmetric self-complementary counts in even cubes:
/// `S(2a+2) / S(2a) = C(3a+1, a)^2 / C(2a, a)^2`.
pub fn cyclic_self_complementary_ratio(a: i64) -> BigRational {
    ratio(binomial(3 * a + 1, a).pow(2), binomial(2 * a, a).pow(2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioCheck {
    pub identity: &'static str,
    pub args: (i64, i64, i64),
    #[serde(serialize_with = "ser_display")]
    pub lhs: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub rhs: BigRational,
    pub holds: bool,
}

pub(crate) fn ser_display<T: std::fmt::Display, S: serde::Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn count(cls: u8, a: i64, b: i64, c: i64) -> Result<BigInt> {
    let dims = BoxDims::new(a, b, c)?;
    n_value(SymmetryClass::new(cls)?, dims)
}

fn check(identity: &'static str, args: (i64, i64, i64), num: BigInt, den: BigInt, rhs: BigRational) -> RatioCheck {
    let lhs = if den.is_zero() { BigRational::zero() } else { ratio(num, den) };
    let holds = lhs == rhs;
    RatioCheck { identity, args, lhs, rhs, holds }
}

/// Evaluates every ratio identity applicable at `(a, b, c)` from formula
/// values: the unrestricted step `(a,b,c) -> (a+1,b+1,c-1)` (needs
/// `c >= 1`), its square for self-complementary boxes `(2a,2b,2c)`, and the
/// cube steps for cyclically symmetric (`a >= 1`) and cyclically symmetric
/// self-complementary partitions.
pub fn ratio_identities(a: i64, b: i64, c: i64) -> Result<Vec<RatioCheck>> {
    let mut out = Vec::new();
    if c >= 1 {
        out.push(check(
            "unrestricted",
            (a, b, c),
            count(1, a + 1, b + 1, c - 1)?,
            count(1, a, b, c)?,
            unrestricted_ratio(a, b, c),
        ));
        let sq = unrestricted_ratio(a, b, c);
        out.push(check(
            "self_complementary",
            (a, b, c),
            count(5, 2 * a + 2, 2 * b + 2, 2 * c - 2)?,
            count(5, 2 * a, 2 * b, 2 * c)?,
            &sq * &sq,
        ));
    }
    if a >= 1 {
        out.push(check("cyclic", (a, a, a), count(3, a + 1, a + 1, a + 1)?, count(3, a, a, a)?, cyclic_ratio(a)));
    }
    out.push(check(
        "cyclic_self_complementary",
        (a, a, a),
        count(9, 2 * a + 2, 2 * a + 2, 2 * a + 2)?,
        count(9, 2 * a, 2 * a, 2 * a)?,
        cyclic_self_complementary_ratio(a),
    ));
    Ok(out)
}

/// Counts obtained by telescoping the ratio identities down to a base case:
/// a flat box for classes 1 and 5, the unit cube for class 3 and the empty
/// box for class 9. Class 5 is reachable only for all-even boxes and
/// classes 3 and 9 only for cubes (even cubes for 9).
pub fn n_class_via_ratios(cls: SymmetryClass, dims: BoxDims) -> Result<BigInt> {
    let (a, b, c) = (dims.a as i64, dims.b as i64, dims.c as i64);
    let unreachable = || Error::UnsupportedPattern { class: cls.id(), dims: dims.as_tuple() };
    let to_int = |r: BigRational| -> Result<BigInt> {
        if r.is_integer() {
            Ok(r.to_integer())
        } else {
            Err(Error::InexactDivision("ratio telescoping"))
        }
    };
    // Product of unrestricted ratios from the flat box down to (a, b, c).
    let unrestricted_chain = |a: i64, b: i64, c: i64| -> BigRational {
        let mut acc = BigRational::one();
        let (mut x, mut y, mut z) = (a, b, c);
        while x > 0 && y > 0 {
            acc *= unrestricted_ratio(x - 1, y - 1, z + 1);
            x -= 1;
            y -= 1;
            z += 1;
        }
        acc
    };
    match cls.id() {
        1 => to_int(unrestricted_chain(a, b, c)),
        5 => {
            if a % 2 != 0 || b % 2 != 0 || c % 2 != 0 {
                return Err(unreachable());
            }
            let r = unrestricted_chain(a / 2, b / 2, c / 2);
            to_int(&r * &r)
        }
        3 => {
            if !dims.is_cube() {
                return Err(unreachable());
            }
            if a == 0 {
                return Ok(BigInt::one());
            }
            let mut acc = BigRational::from_integer(2.into());
            for k in 1..a {
                acc *= cyclic_ratio(k);
            }
            to_int(acc)
        }
        9 => {
            if !dims.is_cube() || a % 2 != 0 {
                return Err(unreachable());
            }
            let mut acc = BigRational::one();
            for k in 0..a / 2 {
                acc *= cyclic_self_complementary_ratio(k);
            }
            to_int(acc)
        }
        _ => Err(Error::UnsupportedMethod { method: "ratios".into(), what: format!("class {}", cls.id()) }),
    }
}
