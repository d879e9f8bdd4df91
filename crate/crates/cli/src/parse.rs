//! Parsers for the small CLI-side mini-languages: durations and class
//! scheme specifications.

use cwmarket::{Error, Result};

/// "10m", "600s", "2h", or bare seconds, to microseconds.
pub fn duration_us(token: &str) -> Result<i64> {
    let token = token.trim();
    let (digits, multiplier) = match token.as_bytes().last() {
        Some(b's') => (&token[..token.len() - 1], 1_000_000i64),
        Some(b'm') => (&token[..token.len() - 1], 60 * 1_000_000),
        Some(b'h') => (&token[..token.len() - 1], 3_600 * 1_000_000),
        _ => (token, 1_000_000),
    };
    let value: f64 = digits
        .parse()
        .map_err(|_| Error::Domain(format!("unparseable duration '{token}'")))?;
    if !(value > 0.0 && value.is_finite()) {
        return Err(Error::Domain(format!(
            "duration must be positive (got '{token}')"
        )));
    }
    Ok((value * multiplier as f64).round() as i64)
}

/// Class scheme spec: classes separated by ';', each a comma list of
/// pair-sum values and/or inclusive ranges "a..b" expanded over the actual
/// support. Example: "-5;-3;3;13..45".
pub fn class_spec(spec: &str, support: &[i64]) -> Result<Vec<Vec<i64>>> {
    let mut classes = Vec::new();
    for class_token in spec.split(';') {
        let class_token = class_token.trim();
        if class_token.is_empty() {
            return Err(Error::ClassScheme("empty class in --classes".into()));
        }
        let mut class = Vec::new();
        for part in class_token.split(',') {
            let part = part.trim();
            if let Some((lo, hi)) = part.split_once("..") {
                let lo: i64 = parse_value(lo)?;
                let hi: i64 = parse_value(hi)?;
                if lo > hi {
                    return Err(Error::ClassScheme(format!("empty range {lo}..{hi}")));
                }
                let mut any = false;
                for &t in support.iter().filter(|&&t| (lo..=hi).contains(&t)) {
                    class.push(t);
                    any = true;
                }
                if !any {
                    return Err(Error::ClassScheme(format!(
                        "range {lo}..{hi} contains no support value"
                    )));
                }
            } else {
                class.push(parse_value(part)?);
            }
        }
        classes.push(class);
    }
    Ok(classes)
}

fn parse_value(token: &str) -> Result<i64> {
    token
        .trim()
        .parse()
        .map_err(|_| Error::ClassScheme(format!("unparseable pair-sum value '{token}'")))
}
