//! JSON schemas for lattices, sublattices, involutions and certificates.
//!
//! Integers are written as JSON numbers when they fit in an `i64` and as
//! decimal strings otherwise; both forms are accepted on input.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::constructions::{CertificateChecks, WitnessCertificate};
use crate::error::{Error, Result};
use crate::involution::Involution;
use crate::lattice::{Lattice, Sublattice};
use crate::linalg::{IntMatrix, IntVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(JsonInt(BigInt::from(v))),
            Raw::Str(s) => s
                .trim()
                .parse()
                .map(JsonInt)
                .map_err(|_| serde::de::Error::custom(format!("`{s}` is not an integer"))),
        }
    }
}

/// `#[serde(with = "int")]` for a single [`BigInt`].
pub mod int {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        JsonInt(v.clone()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        Ok(JsonInt::deserialize(d)?.0)
    }
}

/// `#[serde(with = "int_vec")]` for an [`IntVector`].
pub mod int_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        let w: Vec<JsonInt> = v.iter().cloned().map(JsonInt).collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<IntVector, D::Error> {
        Ok(Vec::<JsonInt>::deserialize(d)?.into_iter().map(|x| x.0).collect())
    }
}

/// `#[serde(with = "opt_int_vec")]` for an optional [`IntVector`].
pub mod opt_int_vec {
    use super::*;

    pub fn serialize<S: Serializer>(
        v: &Option<IntVector>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let w: Option<Vec<JsonInt>> = v.as_ref().map(|v| v.iter().cloned().map(JsonInt).collect());
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<IntVector>, D::Error> {
        let w = Option::<Vec<JsonInt>>::deserialize(d)?;
        Ok(w.map(|v| v.into_iter().map(|x| x.0).collect()))
    }
}

/// `#[serde(with = "int_rows")]` for a list of integer rows.
pub mod int_rows {
    use super::*;

    pub fn serialize<S: Serializer>(
        rows: &[IntVector],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let w: Vec<Vec<JsonInt>> = rows
            .iter()
            .map(|r| r.iter().cloned().map(JsonInt).collect())
            .collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<IntVector>, D::Error> {
        let w = Vec::<Vec<JsonInt>>::deserialize(d)?;
        Ok(w.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeJson {
    pub rank: usize,
    #[serde(with = "int_rows")]
    pub gram: Vec<IntVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// A lattice given by one of the standard names or inline.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LatticeRef {
    Label(String),
    Inline(LatticeJson),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SublatticeJson {
    pub ambient: LatticeRef,
    #[serde(with = "int_rows")]
    pub basis: Vec<IntVector>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvolutionJson {
    pub lattice: LatticeRef,
    #[serde(with = "int_rows")]
    pub matrix: Vec<IntVector>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolarizationJson {
    #[serde(with = "int_vec")]
    pub l: IntVector,
    pub k0: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    #[serde(rename = "M_basis", with = "int_rows")]
    pub m_basis: Vec<IntVector>,
    #[serde(with = "int_vec")]
    pub y: IntVector,
    pub r_image_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarization: Option<PolarizationJson>,
    pub checks: CertificateChecks,
}

impl From<&WitnessCertificate> for CertificateJson {
    fn from(c: &WitnessCertificate) -> Self {
        CertificateJson {
            m_basis: c.m.vectors(),
            y: c.y.clone(),
            r_image_dim: c.r_image_dim,
            polarization: c
                .polarization
                .as_ref()
                .map(|(l, k0)| PolarizationJson { l: l.clone(), k0: *k0 }),
            checks: c.checks.clone(),
        }
    }
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn matrix_from_rows(rows: &[IntVector], cols: usize, what: &str) -> Result<IntMatrix> {
    if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
        return Err(Error::Parse(format!(
            "{what}: row of length {} where {cols} entries were expected",
            bad.len()
        )));
    }
    Ok(IntMatrix::from_rows(rows.to_vec(), cols))
}

impl LatticeJson {
    pub fn to_lattice(&self) -> Result<Lattice> {
        if self.gram.len() != self.rank {
            return Err(Error::Parse(format!(
                "rank {} but gram has {} rows",
                self.rank,
                self.gram.len()
            )));
        }
        let gram = matrix_from_rows(&self.gram, self.rank, "gram")?;
        Lattice::new(gram, self.label.clone())
    }

    pub fn from_lattice(l: &Lattice) -> Self {
        LatticeJson {
            rank: l.rank(),
            gram: l.gram().to_rows(),
            label: l.label().map(str::to_string),
        }
    }
}

impl LatticeRef {
    pub fn resolve(&self) -> Result<Lattice> {
        match self {
            LatticeRef::Label(name) => Lattice::standard(name),
            LatticeRef::Inline(l) => l.to_lattice(),
        }
    }

    /// Refers to `l` by label when the label names a standard lattice with
    /// the same Gram matrix.
    pub fn from_lattice(l: &Lattice) -> Self {
        if let Some(name) = l.label() {
            if Lattice::standard(name).is_ok_and(|std| std.gram() == l.gram()) {
                return LatticeRef::Label(name.to_string());
            }
        }
        LatticeRef::Inline(LatticeJson::from_lattice(l))
    }
}

impl InvolutionJson {
    pub fn to_involution(&self) -> Result<Involution> {
        let lattice = Arc::new(self.lattice.resolve()?);
        if self.matrix.len() != lattice.rank() {
            return Err(Error::DimensionMismatch {
                expected: lattice.rank(),
                got: self.matrix.len(),
            });
        }
        let m = matrix_from_rows(&self.matrix, lattice.rank(), "matrix")?;
        Involution::new(lattice, m)
    }

    pub fn from_involution(s: &Involution) -> Self {
        InvolutionJson {
            lattice: LatticeRef::from_lattice(s.lattice()),
            matrix: s.matrix().to_rows(),
        }
    }
}

impl SublatticeJson {
    pub fn to_sublattice(&self) -> Result<Sublattice> {
        let lattice = Arc::new(self.ambient.resolve()?);
        let basis = matrix_from_rows(&self.basis, lattice.rank(), "basis")?;
        Sublattice::new(lattice, basis)
    }

    pub fn from_sublattice(m: &Sublattice) -> Self {
        SublatticeJson {
            ambient: LatticeRef::from_lattice(m.ambient()),
            basis: m.vectors(),
        }
    }
}

pub fn parse_lattice(text: &str) -> Result<Lattice> {
    serde_json::from_str::<LatticeRef>(text)
        .map_err(parse_error)?
        .resolve()
}

pub fn parse_sublattice(text: &str) -> Result<Sublattice> {
    serde_json::from_str::<SublatticeJson>(text)
        .map_err(parse_error)?
        .to_sublattice()
}

pub fn parse_involution(text: &str) -> Result<Involution> {
    serde_json::from_str::<InvolutionJson>(text)
        .map_err(parse_error)?
        .to_involution()
}

/// A JSON array of integers.
pub fn parse_vector(text: &str) -> Result<IntVector> {
    let v: Vec<JsonInt> = serde_json::from_str(text).map_err(parse_error)?;
    Ok(v.into_iter().map(|x| x.0).collect())
}

pub fn involution_to_string(s: &Involution) -> String {
    serde_json::to_string_pretty(&InvolutionJson::from_involution(s))
        .expect("involution JSON serializes")
}
