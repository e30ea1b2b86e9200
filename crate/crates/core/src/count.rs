//! One entry point over the independent counting routes.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{det, pfaffian_abs, Poly};
use crate::formulas::{n_class, n_class_via_ratios};
use crate::hexgrid::{q_weight_graph, BoxDims, HexRegion};
use crate::kasteleyn::{bipartite_matrix, flat_orientation, flat_signing, skew_matrix};
use crate::oracle::{self, partition_to_matching, PlanePartition};
use crate::symmetry::{quotient_graph, SymmetryClass};

/// Largest box volume the brute-force oracle will enumerate.
pub const ORACLE_VOLUME_LIMIT: u64 = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Formula,
    Matrix,
    Oracle,
    Ratios,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Formula, Method::Matrix, Method::Oracle, Method::Ratios];

    pub fn name(self) -> &'static str {
        match self {
            Method::Formula => "formula",
            Method::Matrix => "matrix",
            Method::Oracle => "oracle",
            Method::Ratios => "ratios",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnsupportedMethod { method: s.into(), what: "counting".into() })
    }
}

/// Number of `cls`-invariant plane partitions in the box, by `method`.
pub fn count(cls: SymmetryClass, dims: BoxDims, method: Method) -> Result<BigInt> {
    match method {
        Method::Formula => Ok(n_class(cls, dims)?.value),
        Method::Matrix => count_matrix(cls, dims),
        Method::Oracle => {
            check_oracle_size(dims)?;
            Ok(oracle::count_symmetric(cls, dims))
        }
        Method::Ratios => n_class_via_ratios(cls, dims),
    }
}

fn check_oracle_size(dims: BoxDims) -> Result<()> {
    if dims.volume() > ORACLE_VOLUME_LIMIT {
        return Err(Error::DimensionLimit {
            what: "oracle box volume",
            dim: dims.volume() as usize,
            limit: ORACLE_VOLUME_LIMIT as usize,
        });
    }
    Ok(())
}

/// Kasteleyn count on the quotient graph: a determinant of the flat-signed
/// bipartite matrix when the quotient is bipartite, otherwise the Pfaffian
/// of a flat orientation.
pub fn count_matrix(cls: SymmetryClass, dims: BoxDims) -> Result<BigInt> {
    if !cls.fixes_box(dims) {
        return Ok(BigInt::zero());
    }
    let g = quotient_graph(&HexRegion::new(dims), cls)?;
    if g.vertex_count() % 2 == 1 {
        return Ok(BigInt::zero());
    }
    let one = BigInt::from(1);
    if g.colors().is_some() {
        let sg = flat_signing(&g)?;
        match bipartite_matrix(&sg) {
            Ok(m) => Ok(det(&m.eval(&one))?.abs()),
            Err(Error::NonSquare { .. }) => Ok(BigInt::zero()),
            Err(e) => Err(e),
        }
    } else {
        let og = flat_orientation(&g)?;
        pfaffian_abs(&skew_matrix(&og).eval(&one))
    }
}

/// Volume generating function of all plane partitions in the box, with
/// ascending exponents. Only the matrix and oracle routes support it.
pub fn q_count(dims: BoxDims, method: Method) -> Result<Poly> {
    match method {
        Method::Matrix => q_determinant(dims),
        Method::Oracle => {
            check_oracle_size(dims)?;
            Ok(oracle::q_sum(dims))
        }
        m => Err(Error::UnsupportedMethod { method: m.name().into(), what: "q-enumeration".into() }),
    }
}

/// Determinant of the flat-signed, q-weighted bipartite matrix, divided by
/// the weight of the empty partition's matching.
pub fn q_determinant(dims: BoxDims) -> Result<Poly> {
    let region = HexRegion::new(dims);
    let g = q_weight_graph(&region);
    let d = det(&bipartite_matrix(&flat_signing(&g)?)?)?;
    let empty = partition_to_matching(&PlanePartition::empty(dims), &region)?;
    let shift: usize = empty.edges.iter().map(|&e| g.edge(e).weight.low_degree().unwrap_or(0)).sum();
    d.normalize_sign().shift_down(shift).ok_or(Error::InexactDivision("q-determinant normalization"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(i: u8) -> SymmetryClass {
        SymmetryClass::new(i).unwrap()
    }

    #[test]
    fn methods_agree_on_small_boxes() {
        for i in 1..=10u8 {
            for a in 0..=2u32 {
                for b in 0..=2u32 {
                    for c in 0..=2u32 {
                        let d = BoxDims { a, b, c };
                        let f = count(cls(i), d, Method::Formula).unwrap();
                        assert_eq!(count(cls(i), d, Method::Matrix).unwrap(), f, "class {i} {d}");
                        assert_eq!(count(cls(i), d, Method::Oracle).unwrap(), f, "class {i} {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn named_counts() {
        assert_eq!(count(cls(1), BoxDims::cube(2), Method::Matrix).unwrap(), 20.into());
        assert_eq!(count(cls(9), BoxDims::cube(2), Method::Formula).unwrap(), 1.into());
        assert_eq!(count(cls(3), BoxDims::cube(2), Method::Ratios).unwrap(), 5.into());
        assert_eq!(count(cls(9), BoxDims::cube(6), Method::Matrix).unwrap(), 49.into());
    }

    #[test]
    fn q_counts() {
        assert_eq!(q_count(BoxDims::cube(1), Method::Matrix).unwrap().to_string(), "1 + q");
        for a in 0..=3 {
            for b in 0..=3 {
                for c in 0..=3 {
                    let d = BoxDims { a, b, c };
                    assert_eq!(q_count(d, Method::Matrix).unwrap(), q_count(d, Method::Oracle).unwrap(), "{d}");
                }
            }
        }
        assert!(q_count(BoxDims::cube(1), Method::Formula).is_err());
    }

    #[test]
    fn oracle_refuses_large_boxes() {
        assert!(matches!(count(cls(1), BoxDims::cube(5), Method::Oracle), Err(Error::DimensionLimit { .. })));
        assert_eq!("matrix".parse::<Method>().unwrap(), Method::Matrix);
        assert!("nope".parse::<Method>().is_err());
    }
}
