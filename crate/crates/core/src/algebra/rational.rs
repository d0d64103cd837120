use num::{BigInt, BigRational, FromPrimitive, ToPrimitive, Zero};

/// Arbitrary-precision rational; always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Small-integer constructor used throughout fixtures and tests.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"` exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let numer: BigInt = numer.parse().ok()?;
    let denom: BigInt = denom.parse().ok()?;
    if denom.is_zero() {
        return None;
    }
    Some(Rational::new(numer, denom))
}

pub fn rational_to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: scale down through the bit lengths.
        let shift = value.numer().bits().max(value.denom().bits()).saturating_sub(1000) as i32;
        let n = (value.numer() >> shift as usize).to_f64().unwrap_or(f64::NAN);
        let d = (value.denom() >> shift as usize).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact rational value of a finite double.
pub fn rational_from_f64(value: f64) -> Rational {
    Rational::from_f64(value).expect("finite double")
}
