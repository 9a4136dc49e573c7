use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Field, Scalar};

/// Commutative rings the forms and matrices are built over.
///
/// Elements carry their ring context (field, variables, precision), so the
/// constructors take a prototype element instead of a ring object.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn field(&self) -> &Field;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn int_like(&self, n: i64) -> Self;
    fn scalar_like(&self, s: &Scalar) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    /// Nonzero scalar, nonzero constant polynomial, or series with a unit
    /// constant term.
    fn is_unit(&self) -> bool;
    fn inverse(&self) -> Option<Self>;

    fn characteristic(&self) -> u64 {
        self.field().characteristic()
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

macro_rules! forward_binops {
    ($t:ty) => {
        impl std::ops::Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                self.add_ref(&o)
            }
        }
        impl std::ops::Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                self.sub_ref(&o)
            }
        }
        impl std::ops::Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                self.mul_ref(&o)
            }
        }
        impl std::ops::Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                self.neg_ref()
            }
        }
        impl<'a> std::ops::Add<&'a $t> for &'a $t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                self.add_ref(o)
            }
        }
        impl<'a> std::ops::Sub<&'a $t> for &'a $t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                self.sub_ref(o)
            }
        }
        impl<'a> std::ops::Mul<&'a $t> for &'a $t {
            type Output = $t;
            fn mul(self, o: &$t) -> $t {
                self.mul_ref(o)
            }
        }
    };
}
pub(crate) use forward_binops;

impl Scalar {
    fn add_ref(&self, o: &Scalar) -> Scalar {
        Scalar::new(&self.field, self.field.add(&self.value, &o.value))
    }
    fn sub_ref(&self, o: &Scalar) -> Scalar {
        Scalar::new(&self.field, self.field.sub(&self.value, &o.value))
    }
    fn mul_ref(&self, o: &Scalar) -> Scalar {
        Scalar::new(&self.field, self.field.mul(&self.value, &o.value))
    }
    fn neg_ref(&self) -> Scalar {
        Scalar::new(&self.field, self.field.neg(&self.value))
    }
}

forward_binops!(Scalar);

impl Ring for Scalar {
    fn field(&self) -> &Field {
        &self.field
    }
    fn zero_like(&self) -> Self {
        Scalar::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        Scalar::one(&self.field)
    }
    fn int_like(&self, n: i64) -> Self {
        Scalar::from_i64(&self.field, n)
    }
    fn scalar_like(&self, s: &Scalar) -> Self {
        s.clone()
    }
    fn is_zero(&self) -> bool {
        self.field.is_zero(&self.value)
    }
    fn is_one(&self) -> bool {
        self.field.is_one(&self.value)
    }
    fn is_unit(&self) -> bool {
        !self.is_zero()
    }
    fn inverse(&self) -> Option<Self> {
        self.field.inv(&self.value).map(|v| Scalar::new(&self.field, v))
    }
}
