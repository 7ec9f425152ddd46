//! Sampled sections of `K^a K̄^b`.

use crate::error::{Error, Result};
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

/// Values of a section of `K^a K̄^b` at the sample points of a domain.
///
/// On the surface the samples are element node copies (see
/// [`crate::surface::Surface`]), on a chart they are grid points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorField {
    #[serde(rename = "type")]
    pub ty: (i32, i32),
    #[serde(with = "pairs")]
    pub values: Vec<C>,
}

impl TensorField {
    pub fn new(ty: (i32, i32), values: Vec<C>) -> Self {
        TensorField { ty, values }
    }

    pub fn zeros(ty: (i32, i32), n: usize) -> Self {
        TensorField { ty, values: vec![C::new(0.0, 0.0); n] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn check_type(&self, ty: (i32, i32)) -> Result<()> {
        if self.ty != ty {
            return Err(Error::Mismatch(format!("tensor type {:?}, expected {:?}", self.ty, ty)));
        }
        Ok(())
    }

    pub fn add(&self, o: &TensorField) -> Result<TensorField> {
        self.same(o)?;
        Ok(TensorField::new(self.ty, self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, o: &TensorField) -> Result<TensorField> {
        self.same(o)?;
        Ok(TensorField::new(self.ty, self.values.iter().zip(&o.values).map(|(a, b)| a - b).collect()))
    }

    pub fn scale(&self, s: C) -> TensorField {
        TensorField::new(self.ty, self.values.iter().map(|a| a * s).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn same(&self, o: &TensorField) -> Result<()> {
        if self.ty != o.ty || self.len() != o.len() {
            return Err(Error::Mismatch(format!(
                "fields of type {:?}/{} and {:?}/{}",
                self.ty,
                self.len(),
                o.ty,
                o.len()
            )));
        }
        Ok(())
    }
}

/// Complex vectors as `[[re, im], ...]` in JSON.
pub mod pairs {
    use num_complex::Complex64 as C;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[C], s: S) -> Result<S::Ok, S::Error> {
        let p: Vec<[f64; 2]> = v.iter().map(|c| [c.re, c.im]).collect();
        p.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C>, D::Error> {
        let p: Vec<[f64; 2]> = Vec::deserialize(d)?;
        Ok(p.into_iter().map(|[re, im]| C::new(re, im)).collect())
    }
}
