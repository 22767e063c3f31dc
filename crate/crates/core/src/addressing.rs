//! Base-`m` multi-field addresses for wavelength channels.
//!
//! A [`FieldAddress`] stores its digits most significant first, so the
//! printed address `010` is `digits == [0, 1, 0]` and the leading field
//! (`x_n`, the group field) is `digits[0]`.

use std::fmt;

use crate::error::{Error, Result};

/// An `n`-field base-`m` address naming one wavelength channel.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldAddress {
    base: usize,
    digits: Vec<usize>,
}

/// The physical form of a channel address: a fiber and a wavelength on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoTuple {
    pub fiber: u64,
    pub wavelength: usize,
}

impl TwoTuple {
    pub fn new(fiber: u64, wavelength: usize) -> Self {
        TwoTuple { fiber, wavelength }
    }
}

/// `base^width`, or `None` when it does not fit in a `u64`.
pub fn checked_power(base: usize, width: usize) -> Option<u64> {
    let base = u64::try_from(base).ok()?;
    let exp = u32::try_from(width).ok()?;
    base.checked_pow(exp)
}

impl FieldAddress {
    pub fn new(digits: Vec<usize>, base: usize) -> Result<Self> {
        if base < 2 {
            return Err(Error::Config(format!("address base must be at least 2, got {base}")));
        }
        if digits.is_empty() {
            return Err(Error::Shape("address must have at least one field".into()));
        }
        if checked_power(base, digits.len()).is_none() {
            return Err(Error::Shape(format!(
                "{}-field base-{base} address does not fit in 64 bits",
                digits.len()
            )));
        }
        if let Some(&bad) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::range("digit", bad, base));
        }
        Ok(FieldAddress { base, digits })
    }

    /// The all-zero address of the given shape.
    pub fn zero(base: usize, width: usize) -> Result<Self> {
        Self::new(vec![0; width], base)
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn width(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    /// The most significant field, `x_n`.
    pub fn leading(&self) -> usize {
        self.digits[0]
    }

    /// The least significant field, `x_1`.
    pub fn trailing(&self) -> usize {
        self.digits[self.digits.len() - 1]
    }

    pub fn to_integer(&self) -> u64 {
        digits_value(&self.digits, self.base)
    }

    pub fn from_integer(value: u64, base: usize, width: usize) -> Result<Self> {
        if base < 2 {
            return Err(Error::Config(format!("address base must be at least 2, got {base}")));
        }
        if width == 0 {
            return Err(Error::Shape("address must have at least one field".into()));
        }
        let limit = checked_power(base, width).ok_or_else(|| {
            Error::Shape(format!("{width}-field base-{base} address does not fit in 64 bits"))
        })?;
        if value >= limit {
            return Err(Error::range("address value", value, limit));
        }
        let b = base as u64;
        let mut digits = vec![0; width];
        let mut rest = value;
        for slot in digits.iter_mut().rev() {
            *slot = (rest % b) as usize;
            rest /= b;
        }
        Ok(FieldAddress { base, digits })
    }

    /// Cyclic shift by one field: `x_n x_{n-1} .. x_1` becomes `x_{n-1} .. x_1 x_n`.
    pub fn rotate_left(&self) -> Self {
        let mut digits = self.digits.clone();
        digits.rotate_left(1);
        FieldAddress { base: self.base, digits }
    }

    /// Splits into `(group p, port a, wavelength field q')`.
    ///
    /// `a` is the integer value of the middle `n - 2` digits; it is zero for a
    /// two-field address.
    pub fn split_fields(&self) -> Result<(usize, u64, usize)> {
        if self.width() < 2 {
            return Err(Error::Shape(format!(
                "splitting needs at least two fields, address has {}",
                self.width()
            )));
        }
        let middle = &self.digits[1..self.width() - 1];
        Ok((self.leading(), digits_value(middle, self.base), self.trailing()))
    }

    /// Integer value of the leading `n - 1` digits; this is the fiber that
    /// carries the channel.
    pub fn fiber_index(&self) -> u64 {
        digits_value(&self.digits[..self.width() - 1], self.base)
    }

    /// Input-side two-tuple: fiber from the leading `n - 1` digits, wavelength
    /// `[x_n + x_1]_m`.
    pub fn field_to_tuple(&self) -> Result<TwoTuple> {
        if self.width() < 2 {
            return Err(Error::Shape(format!(
                "two-tuple form needs at least two fields, address has {}",
                self.width()
            )));
        }
        Ok(TwoTuple {
            fiber: self.fiber_index(),
            wavelength: (self.leading() + self.trailing()) % self.base,
        })
    }

    /// Inverse of [`field_to_tuple`](Self::field_to_tuple): the trailing digit
    /// is recovered as `[i - x_n]_m`.
    pub fn tuple_to_field(tuple: TwoTuple, base: usize, width: usize) -> Result<Self> {
        if width < 2 {
            return Err(Error::Shape(format!(
                "two-tuple form needs at least two fields, got width {width}"
            )));
        }
        if tuple.wavelength >= base {
            return Err(Error::range("wavelength", tuple.wavelength, base));
        }
        let prefix = Self::from_integer(tuple.fiber, base, width - 1)?;
        let mut digits = prefix.digits;
        let lead = digits[0];
        digits.push((tuple.wavelength + base - lead) % base);
        Ok(FieldAddress { base, digits })
    }

    /// Same address with the trailing field replaced.
    pub fn with_trailing(&self, digit: usize) -> Result<Self> {
        if digit >= self.base {
            return Err(Error::range("digit", digit, self.base));
        }
        let mut digits = self.digits.clone();
        let last = digits.len() - 1;
        digits[last] = digit;
        Ok(FieldAddress { base: self.base, digits })
    }

    /// Parses the canonical text form for the given base.
    ///
    /// Bases up to 10 use one character per field (`"010"`); larger bases use
    /// dot-separated decimal fields (`"12.0.3"`). Dotted input is accepted for
    /// any base.
    pub fn parse(text: &str, base: usize) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty address".into()));
        }
        let digits = if text.contains('.') || base > 10 {
            text.split('.')
                .map(|f| {
                    f.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad address field {f:?} in {text:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parse(format!("bad address digit {c:?} in {text:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Self::new(digits, base)
    }
}

impl fmt::Display for FieldAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_digits(&self.digits, self.base))
    }
}

pub(crate) fn digits_value(digits: &[usize], base: usize) -> u64 {
    digits
        .iter()
        .fold(0u64, |acc, &d| acc * base as u64 + d as u64)
}

/// Canonical text for a digit string; see [`FieldAddress::parse`].
pub fn render_digits(digits: &[usize], base: usize) -> String {
    if base <= 10 {
        digits.iter().map(|d| char::from(b'0' + *d as u8)).collect()
    } else {
        digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(".")
    }
}
