#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use padic_gk::padic::{CycloElement, PadicScalar, ResidualFloor};
use serde_json::Value;

/// Bernoulli numbers by the Akiyama-Tanigawa algorithm (`B_1 = +1/2` there;
/// flipped to `-1/2` here).
pub fn akiyama_tanigawa(n: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(n + 1);
    let mut a: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(BigRational::new(BigInt::one(), BigInt::from(m as u64 + 1)));
        for j in (1..=m).rev() {
            let d = &a[j - 1] - &a[j];
            a[j - 1] = d * BigRational::from_integer(BigInt::from(j as u64));
        }
        out.push(a[0].clone());
    }
    if n >= 1 {
        out[1] = -out[1].clone();
    }
    out
}

/// `omega(a)` as `a^(p^w) mod p^w`.
pub fn teichmuller_direct(p: u32, a: u64, w: u32) -> PadicScalar {
    let m = BigUint::from(p).pow(w);
    let e = BigUint::from(p).pow(w);
    let r = BigUint::from(a).modpow(&e, &m);
    PadicScalar::from_parts(p, 0, r, w).unwrap()
}

/// `L_p(s, omega^(k+1))` at an integer `s`, using exact binomials, direct
/// powers of `<a>` and its own Bernoulli numbers.
pub fn lp_at_integer(p: u32, k: u32, s: i64, w: u32) -> PadicScalar {
    let ws = w + 12;
    let big_j = (ws + 16) as usize;
    let bern = akiyama_tanigawa(big_j);
    let one_minus_s = BigInt::from(1 - s);
    let mut total = PadicScalar::exact_zero(p);
    for a in 1..p as u64 {
        let omega = teichmuller_direct(p, a, ws);
        let unit = PadicScalar::from_i64(p, a as i64, ws)
            .checked_div(&omega)
            .unwrap();
        // <a>^(1-s)
        let e = 1 - s;
        let pow = if e >= 0 {
            unit.pow(e as u64)
        } else {
            unit.pow((-e) as u64).inv().unwrap()
        };
        let mut inner = PadicScalar::exact_zero(p);
        let mut binom = BigRational::one();
        let p_over_a = BigRational::new(BigInt::from(p), BigInt::from(a));
        let mut ratio_pow = BigRational::one();
        for (j, b) in bern.iter().enumerate() {
            if j > 0 {
                binom = binom
                    * BigRational::from_integer(&one_minus_s - BigInt::from(j as u64 - 1))
                    / BigRational::from_integer(BigInt::from(j as u64));
            }
            if !b.is_zero() && !binom.is_zero() {
                let term = &binom * b * &ratio_pow;
                inner = inner
                    .checked_add(&PadicScalar::from_rational(p, &term, ws))
                    .unwrap();
            }
            ratio_pow *= &p_over_a;
        }
        let theta = omega.pow(((k + 1) % (p - 1)) as u64);
        total = total
            .checked_add(
                &theta
                    .checked_mul(&pow)
                    .unwrap()
                    .checked_mul(&inner)
                    .unwrap(),
            )
            .unwrap();
    }
    let denom = PadicScalar::from_i64(p, s - 1, ws).shift(1);
    total.checked_div(&denom).unwrap().cap_abs(w as i64)
}

/// Central difference `(L(h) - L(-h)) / 2h` with `h = p^m`.
pub fn finite_difference(p: u32, k: u32, m: u32, w: u32) -> PadicScalar {
    let h = (p as i64).pow(m);
    let plus = lp_at_integer(p, k, h, w);
    let minus = lp_at_integer(p, k, -h, w);
    plus.checked_sub(&minus)
        .unwrap()
        .div_int(2)
        .unwrap()
        .shift(-(m as i64))
}

/// Relative digits on which `x` and `y` agree, measured against `x`.
pub fn agreeing_digits(x: &PadicScalar, y: &PadicScalar) -> i64 {
    let d = x.checked_sub(y).unwrap();
    let v = x.valuation().expect("reference is nonzero");
    d.floor().map_or(i64::MAX, |f| f - v)
}

fn parse_floor(v: &Value) -> Option<(Option<(i64, i64)>, bool)> {
    let obj = v.as_object()?;
    if obj.len() != 2 {
        return None;
    }
    let digits = obj.get("digits")?.as_str()?;
    let zero = obj.get("zero_at_precision")?.as_bool()?;
    let d = if digits == "inf" {
        None
    } else {
        let (n, q) = digits.split_once('/').unwrap_or((digits, "1"));
        Some((n.parse().ok()?, q.parse().ok()?))
    };
    Some((d, zero))
}

fn cmp_ratio(a: (i64, i64), b: (i64, i64)) -> std::cmp::Ordering {
    (a.0 as i128 * b.1 as i128).cmp(&(b.0 as i128 * a.1 as i128))
}

/// Walks two reports in parallel and lists every place where the second
/// contradicts a digit or floor the first declared.
pub fn precision_conflicts(p: u32, low: &Value, high: &Value, path: &str, out: &mut Vec<String>) {
    if let (Some(a), Some(b)) = (parse_floor(low), parse_floor(high)) {
        let ok = match (a, b) {
            ((None, _), (None, _)) => true,
            ((None, _), _) => false,
            ((Some(f), true), (Some(g), _)) => cmp_ratio(g, f).is_ge(),
            ((Some(f), true), (None, _)) => {
                let _ = f;
                true
            }
            ((Some(f), false), (Some(g), false)) => cmp_ratio(f, g).is_eq(),
            ((Some(_), false), _) => false,
        };
        if !ok {
            out.push(format!("{path}: floor {low} vs {high}"));
        }
        return;
    }
    match (low, high) {
        (Value::Object(a), Value::Object(b)) => {
            for (k, va) in a {
                if path.is_empty() && (k == "config" || k == "timings") {
                    continue;
                }
                match b.get(k) {
                    Some(vb) => precision_conflicts(p, va, vb, &format!("{path}/{k}"), out),
                    None => out.push(format!("{path}/{k}: missing")),
                }
            }
        }
        (Value::Array(a), Value::Array(b)) => {
            if a.len() != b.len() {
                out.push(format!("{path}: length {} vs {}", a.len(), b.len()));
                return;
            }
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                precision_conflicts(p, x, y, &format!("{path}/{i}"), out);
            }
        }
        (Value::String(a), Value::String(b)) if a.starts_with('[') => {
            match (CycloElement::parse(a, p), CycloElement::parse(b, p)) {
                (Ok(x), Ok(y)) => {
                    if !x.agrees_with(&y) {
                        out.push(format!("{path}: cyclotomic value disagrees"));
                    }
                }
                _ => {
                    if a != b {
                        out.push(format!("{path}: {a} vs {b}"));
                    }
                }
            }
        }
        (Value::String(a), Value::String(b)) if a.contains("::") || a == "0" => {
            match (PadicScalar::parse(a, p), PadicScalar::parse(b, p)) {
                (Ok(x), Ok(y)) => {
                    if !x.agrees_with(&y) {
                        out.push(format!("{path}: {a} vs {b}"));
                    }
                }
                _ => out.push(format!("{path}: unparsable {a} / {b}")),
            }
        }
        (Value::Number(_), Value::Number(_)) | (Value::Bool(_), Value::Bool(_)) => {
            // digit counts, thresholds and verdicts move with N
            let volatile = [
                "threshold",
                "meets_threshold",
                "passed",
                "all_meet_threshold",
                "det_valuation",
            ];
            if low != high && !volatile.iter().any(|v| path.ends_with(v)) {
                out.push(format!("{path}: {low} vs {high}"));
            }
        }
        _ => {
            if low != high {
                out.push(format!("{path}: {low} vs {high}"));
            }
        }
    }
}

/// True when `f` is a zero-at-precision floor of at least `threshold`.
pub fn floor_meets(f: &ResidualFloor, threshold: i64) -> bool {
    f.meets(threshold)
}
