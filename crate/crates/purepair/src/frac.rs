//! Exact rational thresholds.
//!
//! Every combinatorial predicate that compares a count against a fraction of
//! something (degree < eps*n, at least lambda*w covered vertices, width >=
//! kappa*w) goes through this module; floats never enter those comparisons.

use num::rational::Ratio;
use num::{One, Zero};
use std::str::FromStr;

pub type Frac = Ratio<i128>;

pub fn frac(num: i128, den: i128) -> Frac {
    Ratio::new(num, den)
}

/// 1 / (2^a * b^c), the shape of every threshold constant in the pipeline.
pub fn inv_pow2_times_pow(a: u32, b: u64, c: u32) -> Frac {
    let den = (i128::from(1u8) << a) * (b as i128).pow(c);
    Ratio::new(1, den)
}

/// Smallest integer >= f * m. For integer counts, `count >= f*m` iff
/// `count >= ceil_mul(f, m)`.
pub fn ceil_mul(f: Frac, m: usize) -> usize {
    let v = f * Frac::from_integer(m as i128);
    let c = v.ceil().to_integer();
    assert!(c >= 0, "negative threshold");
    c as usize
}

/// count >= f * m, exactly.
pub fn at_least_frac(count: usize, f: Frac, m: usize) -> bool {
    Frac::from_integer(count as i128) >= f * Frac::from_integer(m as i128)
}

/// count < f * m, exactly (strict).
pub fn below_frac(count: usize, f: Frac, m: usize) -> bool {
    Frac::from_integer(count as i128) < f * Frac::from_integer(m as i128)
}

/// Parses "p/q", a decimal like "0.05", or an integer. Exact: "0.05" = 1/20.
pub fn parse_frac(s: &str) -> Result<Frac, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = i128::from_str(p.trim()).map_err(|e| format!("bad numerator {:?}: {}", p, e))?;
        let q = i128::from_str(q.trim()).map_err(|e| format!("bad denominator {:?}: {}", q, e))?;
        if q == 0 {
            return Err("zero denominator".into());
        }
        return Ok(Ratio::new(p, q));
    }
    if let Some((int, dec)) = s.split_once('.') {
        // sign comes from the string, not the parsed integer part: "-0.25"
        let negative = int.starts_with('-');
        let int_mag = int.trim_start_matches(['-', '+']);
        let int_v = if int_mag.is_empty() {
            0
        } else {
            i128::from_str(int_mag).map_err(|e| e.to_string())?
        };
        if dec.is_empty() || !dec.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad decimal {:?}", s));
        }
        let scale = 10i128.checked_pow(dec.len() as u32).ok_or("decimal too long")?;
        let dec_v = i128::from_str(dec).map_err(|e| e.to_string())?;
        let mag = int_v * scale + dec_v;
        return Ok(Ratio::new(if negative { -mag } else { mag }, scale));
    }
    i128::from_str(s).map(Frac::from_integer).map_err(|e| format!("bad fraction {:?}: {}", s, e))
}

pub fn format_frac(f: Frac) -> String {
    if f.denom().is_one() {
        format!("{}", f.numer())
    } else {
        format!("{}/{}", f.numer(), f.denom())
    }
}

pub fn frac_to_f64(f: Frac) -> f64 {
    *f.numer() as f64 / *f.denom() as f64
}

pub fn is_zero(f: Frac) -> bool {
    f.is_zero()
}
