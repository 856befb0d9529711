//! Exact arithmetic over prime fields GF(p).
//!
//! Hot paths work on raw `u32` representatives through a [`Field`] handle;
//! [`FieldElement`] is the checked value type that carries its modulus and
//! refuses to mix fields.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, UmatchError};

/// A prime field GF(p). Elements are canonical representatives in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Field {
    modulus: u32,
}

impl Field {
    pub const GF2: Field = Field { modulus: 2 };

    pub fn new(modulus: u64) -> Result<Self> {
        if modulus > u32::MAX as u64 || !is_prime(modulus) {
            return Err(UmatchError::NotPrime(modulus));
        }
        Ok(Field {
            modulus: modulus as u32,
        })
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.modulus
    }

    #[inline]
    pub fn is_binary(self) -> bool {
        self.modulus == 2
    }

    /// Reduce an arbitrary signed integer into the field.
    pub fn from_i64(self, v: i64) -> u32 {
        v.rem_euclid(self.modulus as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        if self.modulus == 2 {
            return a ^ b;
        }
        let s = a as u64 + b as u64;
        let p = self.modulus as u64;
        (if s >= p { s - p } else { s }) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if self.modulus == 2 {
            return a ^ b;
        }
        if a >= b {
            a - b
        } else {
            (a as u64 + self.modulus as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 || self.modulus == 2 {
            a
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        if self.modulus == 2 {
            return a & b;
        }
        ((a as u64 * b as u64) % self.modulus as u64) as u32
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(UmatchError::DivisionByZero(self.modulus));
        }
        if self.modulus == 2 {
            return Ok(1);
        }
        let (mut r0, mut r1) = (self.modulus as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.from_i64(t0))
    }

    /// `a / b`; panics on `b == 0`. Use [`Field::inv`] for the checked form.
    #[inline]
    pub fn div(self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b).expect("division by zero"))
    }

    pub fn element(self, value: i64) -> FieldElement {
        FieldElement {
            value: self.from_i64(value),
            field: self,
        }
    }
}

impl Default for Field {
    fn default() -> Self {
        Field::GF2
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.modulus)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A field element tagged with its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    field: Field,
}

#[allow(clippy::should_implement_trait)]
impl FieldElement {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn field(self) -> Field {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn same_field(self, other: FieldElement) -> Result<Field> {
        if self.field != other.field {
            return Err(UmatchError::FieldMismatch {
                left: self.field.modulus,
                right: other.field.modulus,
            });
        }
        Ok(self.field)
    }

    pub fn add(self, other: FieldElement) -> Result<FieldElement> {
        let f = self.same_field(other)?;
        Ok(FieldElement {
            value: f.add(self.value, other.value),
            field: f,
        })
    }

    pub fn sub(self, other: FieldElement) -> Result<FieldElement> {
        let f = self.same_field(other)?;
        Ok(FieldElement {
            value: f.sub(self.value, other.value),
            field: f,
        })
    }

    pub fn mul(self, other: FieldElement) -> Result<FieldElement> {
        let f = self.same_field(other)?;
        Ok(FieldElement {
            value: f.mul(self.value, other.value),
            field: f,
        })
    }

    pub fn neg(self) -> FieldElement {
        FieldElement {
            value: self.field.neg(self.value),
            field: self.field,
        }
    }

    pub fn inv(self) -> Result<FieldElement> {
        Ok(FieldElement {
            value: self.field.inv(self.value)?,
            field: self.field,
        })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
