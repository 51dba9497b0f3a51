//! Complex numbers on the command line: `i`, `-2.5i`, `3+2i`, `0.5-1.5i`,
//! `(1+3i)/2` or the pair form `re,im`.

use num_complex::Complex64;

pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex number".into());
    }
    if let Some((re, im)) = s.split_once(',') {
        let re = parse_real(re, text)?;
        let im = parse_real(im, text)?;
        return Ok(Complex64::new(re, im));
    }
    if let Some(rest) = s.strip_prefix('(') {
        let (inner, tail) = rest
            .split_once(')')
            .ok_or_else(|| format!("unbalanced parenthesis in {text:?}"))?;
        let z = parse_sum(inner, text)?;
        if tail.is_empty() {
            return Ok(z);
        }
        let d = tail
            .strip_prefix('/')
            .ok_or_else(|| format!("expected '/' after ')' in {text:?}"))?;
        let d = parse_real(d, text)?;
        if d == 0.0 {
            return Err(format!("division by zero in {text:?}"));
        }
        return Ok(z / d);
    }
    parse_sum(&s, text)
}

fn parse_real(s: &str, text: &str) -> Result<f64, String> {
    let v: f64 = s
        .parse()
        .map_err(|_| format!("invalid number {s:?} in {text:?}"))?;
    if !v.is_finite() {
        return Err(format!("non-finite number in {text:?}"));
    }
    Ok(v)
}

/// Sum of real and imaginary terms.
fn parse_sum(s: &str, text: &str) -> Result<Complex64, String> {
    let bytes = s.as_bytes();
    let mut starts = vec![0];
    for k in 1..bytes.len() {
        let prev = bytes[k - 1];
        if (bytes[k] == b'+' || bytes[k] == b'-') && prev != b'e' && prev != b'E' {
            starts.push(k);
        }
    }
    starts.push(bytes.len());
    let mut z = Complex64::new(0.0, 0.0);
    for w in starts.windows(2) {
        let term = &s[w[0]..w[1]];
        if term.is_empty() {
            return Err(format!("malformed complex number {text:?}"));
        }
        match term.strip_suffix('i') {
            Some(coef) => {
                let coef = coef.strip_suffix('*').unwrap_or(coef);
                z.im += match coef {
                    "" | "+" => 1.0,
                    "-" => -1.0,
                    c => parse_real(c, text)?,
                };
            }
            None => z.re += parse_real(term, text)?,
        }
    }
    Ok(z)
}
