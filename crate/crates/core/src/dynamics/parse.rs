//! Text formats for maps and start points.
//!
//! A map is one of
//!
//! * an affine polynomial expression in `z`, e.g. `z^2+1`, `2z^3 - z + 1/2`;
//! * `affine c0 c1 ... cd` (optionally prefixed by `map P1`), listing the
//!   coefficients of `z^0 .. z^d`;
//! * a general morphism of `P^N`:
//!
//!   ```text
//!   map PN <N> <d>
//!   coef e0 e1 ... eN  coef e0 e1 ... eN ...   # F_0
//!   ...                                        # F_N
//!   ```
//!
//!   one line per form, each a run of `N + 2` numbers per term.
//!
//! Blank lines and `#` comments are ignored. Coefficients may be fractions
//! `a/b`; denominators are cleared by scaling every form by their lcm, and
//! the primes dividing that lcm are recorded as exceptional.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::morphism::{AffinePolyMap, HomPoly, ProjectiveMorphism};
use super::point::ProjPointQ;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
struct Fraction {
    num: BigInt,
    den: BigInt,
}

impl Fraction {
    fn integer(n: BigInt) -> Self {
        Fraction {
            num: n,
            den: BigInt::one(),
        }
    }
}

pub fn parse_map(text: &str) -> Result<ProjectiveMorphism> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let Some(&(line_no, first)) = lines.first() else {
        return Err(Error::parse(1, 1, "empty map description"));
    };
    let words: Vec<(usize, &str)> = split_words(first);
    match words.first().map(|w| w.1) {
        Some("map") => match words.get(1).map(|w| w.1) {
            Some("P1") if words.get(2).map(|w| w.1) == Some("affine") => {
                check_single_line(&lines)?;
                parse_affine_list(line_no, &words[3..], words[2].0)
            }
            Some("PN") => parse_general(line_no, &words, &lines[1..]),
            Some(other) => Err(Error::parse(
                line_no,
                words[1].0,
                format!("expected `P1 affine` or `PN`, found `{other}`"),
            )),
            None => Err(Error::parse(line_no, first.len() + 1, "expected map kind")),
        },
        Some("affine") => {
            check_single_line(&lines)?;
            parse_affine_list(line_no, &words[1..], words[0].0)
        }
        _ => {
            check_single_line(&lines)?;
            parse_affine_expr(line_no, first)
        }
    }
}

fn check_single_line(lines: &[(usize, &str)]) -> Result<()> {
    match lines.get(1) {
        Some(&(line, _)) => Err(Error::parse(line, 1, "unexpected extra line")),
        None => Ok(()),
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Whitespace-separated words with their 1-based column.
fn split_words(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, w)| (s + 1, w)).collect()
}

fn parse_fraction(word: &str, line: usize, column: usize) -> Result<Fraction> {
    let bad = || Error::parse(line, column, format!("invalid number `{word}`"));
    let (num, den) = match word.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (word, None),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = match den {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::parse(line, column, "zero denominator"));
    }
    let (num, den) = if den.is_negative() {
        (-num, -den)
    } else {
        (num, den)
    };
    let g = num.gcd(&den);
    Ok(Fraction {
        num: &num / &g,
        den: &den / &g,
    })
}

fn parse_affine_list(line: usize, words: &[(usize, &str)], after: usize) -> Result<ProjectiveMorphism> {
    if words.len() < 2 {
        return Err(Error::parse(
            line,
            words.last().map_or(after, |w| w.0),
            "affine map needs coefficients c0 c1 ... cd with d >= 1",
        ));
    }
    let coeffs = words
        .iter()
        .map(|&(col, w)| parse_fraction(w, line, col))
        .collect::<Result<Vec<_>>>()?;
    affine_from_fractions(coeffs, line, words[0].0)
}

fn affine_from_fractions(coeffs: Vec<Fraction>, line: usize, column: usize) -> Result<ProjectiveMorphism> {
    let lcm = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(&c.den));
    let scaled: Vec<BigInt> = coeffs.iter().map(|c| &c.num * (&lcm / &c.den)).collect();
    if lcm.is_one() {
        let map = AffinePolyMap::new(scaled).map_err(|e| Error::parse(line, column, e.to_string()))?;
        return Ok(map.to_morphism());
    }
    let mut trimmed = scaled;
    while trimmed.last().is_some_and(Zero::is_zero) {
        trimmed.pop();
    }
    if trimmed.len() < 2 {
        return Err(Error::parse(line, column, "affine map must have degree at least 1"));
    }
    let d = (trimmed.len() - 1) as u32;
    let top = trimmed
        .iter()
        .enumerate()
        .map(|(k, c)| (vec![k as u32, d - k as u32], c.clone()))
        .collect();
    let f0 = HomPoly::new(2, d, top)?;
    let f1 = HomPoly::new(2, d, vec![(vec![0, d], lcm.clone())])?;
    let primes = prime_factors(&lcm).ok_or_else(|| Error::parse(line, column, "denominators too large"))?;
    Ok(ProjectiveMorphism::new(vec![f0, f1])?.with_denominator_primes(primes))
}

fn parse_general(
    line: usize,
    header: &[(usize, &str)],
    body: &[(usize, &str)],
) -> Result<ProjectiveMorphism> {
    let num_at = |i: usize, what: &str| -> Result<u32> {
        let &(col, w) = header
            .get(i)
            .ok_or_else(|| Error::parse(line, header.last().map_or(1, |w| w.0 + w.1.len()), format!("expected {what}")))?;
        w.parse::<u32>()
            .map_err(|_| Error::parse(line, col, format!("invalid {what} `{w}`")))
    };
    let n = num_at(2, "dimension N")? as usize;
    let d = num_at(3, "degree d")?;
    if let Some(&(col, _)) = header.get(4) {
        return Err(Error::parse(line, col, "unexpected token after degree"));
    }
    if n == 0 {
        return Err(Error::parse(line, header[2].0, "dimension must be at least 1"));
    }
    if body.len() != n + 1 {
        let (l, c) = body.get(n + 1).map_or((line, 1), |&(l, _)| (l, 1));
        return Err(Error::parse(
            l,
            c,
            format!("expected {} form lines, found {}", n + 1, body.len()),
        ));
    }
    let width = n + 2;
    let mut raw_forms = Vec::with_capacity(n + 1);
    for &(l, text) in body {
        let words = split_words(text);
        if !words.len().is_multiple_of(width) {
            return Err(Error::parse(
                l,
                words.last().map_or(1, |w| w.0),
                format!("each term needs {width} numbers: coef e0 ... e{n}"),
            ));
        }
        let mut terms = Vec::new();
        for chunk in words.chunks(width) {
            let coef = parse_fraction(chunk[0].1, l, chunk[0].0)?;
            let mut exps = Vec::with_capacity(n + 1);
            for &(col, w) in &chunk[1..] {
                exps.push(
                    w.parse::<u32>()
                        .map_err(|_| Error::parse(l, col, format!("invalid exponent `{w}`")))?,
                );
            }
            let total: u32 = exps.iter().sum();
            if total != d {
                return Err(Error::parse(
                    l,
                    chunk[0].0,
                    format!("term has total degree {total}, expected {d}"),
                ));
            }
            terms.push((exps, coef));
        }
        raw_forms.push((l, terms));
    }
    let lcm = raw_forms
        .iter()
        .flat_map(|(_, ts)| ts.iter())
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(&c.den));
    let mut forms = Vec::with_capacity(n + 1);
    for (l, terms) in raw_forms {
        let terms = terms
            .into_iter()
            .map(|(e, c)| (e, &c.num * (&lcm / &c.den)))
            .collect();
        forms.push(HomPoly::new(n + 1, d, terms).map_err(|e| Error::parse(l, 1, e.to_string()))?);
    }
    let phi = ProjectiveMorphism::new(forms).map_err(|e| Error::parse(line, 1, e.to_string()))?;
    let primes = prime_factors(&lcm).ok_or_else(|| Error::parse(line, 1, "denominators too large"))?;
    Ok(phi.with_denominator_primes(primes))
}

fn parse_affine_expr(line: usize, text: &str) -> Result<ProjectiveMorphism> {
    let chars: Vec<(usize, char)> = text
        .char_indices()
        .map(|(i, c)| (i + 1, c))
        .filter(|(_, c)| !c.is_whitespace())
        .collect();
    let end_col = text.len() + 1;
    let mut pos = 0;
    let mut coeffs: Vec<Fraction> = Vec::new();
    let col_at = |pos: usize| chars.get(pos).map_or(end_col, |c| c.0);

    while pos < chars.len() {
        let term_col = col_at(pos);
        let mut negative = false;
        if let Some(&(_, s)) = chars.get(pos) {
            if s == '+' || s == '-' {
                negative = s == '-';
                pos += 1;
            } else if !coeffs.is_empty() || pos > 0 {
                return Err(Error::parse(line, col_at(pos), format!("expected `+` or `-`, found `{s}`")));
            }
        }
        let digits_start = pos;
        while chars.get(pos).is_some_and(|c| c.1.is_ascii_digit() || c.1 == '/') {
            pos += 1;
        }
        let coef = if pos > digits_start {
            let word: String = chars[digits_start..pos].iter().map(|c| c.1).collect();
            Some(parse_fraction(&word, line, col_at(digits_start))?)
        } else {
            None
        };
        if chars.get(pos).is_some_and(|c| c.1 == '*') {
            if coef.is_none() {
                return Err(Error::parse(line, col_at(pos), "`*` without a coefficient"));
            }
            pos += 1;
            if !chars.get(pos).is_some_and(|c| c.1 == 'z' || c.1 == 'x') {
                return Err(Error::parse(line, col_at(pos), "expected `z` after `*`"));
            }
        }
        let mut exp = 0u32;
        if chars.get(pos).is_some_and(|c| c.1 == 'z' || c.1 == 'x') {
            pos += 1;
            exp = 1;
            if chars.get(pos).is_some_and(|c| c.1 == '^') {
                pos += 1;
                let start = pos;
                while chars.get(pos).is_some_and(|c| c.1.is_ascii_digit()) {
                    pos += 1;
                }
                if pos == start {
                    return Err(Error::parse(line, col_at(pos), "expected exponent after `^`"));
                }
                let word: String = chars[start..pos].iter().map(|c| c.1).collect();
                exp = word
                    .parse()
                    .map_err(|_| Error::parse(line, col_at(start), "exponent too large"))?;
            }
        } else if coef.is_none() {
            let msg = match chars.get(pos) {
                Some(&(_, c)) => format!("unexpected character `{c}`"),
                None => "expected a term".to_string(),
            };
            return Err(Error::parse(line, col_at(pos), msg));
        }
        if exp > 64 {
            return Err(Error::parse(line, term_col, "degree too large"));
        }
        let mut coef = coef.unwrap_or_else(|| Fraction::integer(BigInt::one()));
        if negative {
            coef.num = -coef.num;
        }
        let k = exp as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, Fraction::integer(BigInt::zero()));
        }
        let slot = &mut coeffs[k];
        let num = &slot.num * &coef.den + &coef.num * &slot.den;
        let den = &slot.den * &coef.den;
        let g = num.gcd(&den);
        *slot = if g.is_zero() {
            Fraction::integer(BigInt::zero())
        } else {
            Fraction {
                num: num / &g,
                den: den / g,
            }
        };
    }
    if coeffs.is_empty() {
        return Err(Error::parse(line, 1, "empty map description"));
    }
    affine_from_fractions(coeffs, line, 1)
}

/// Distinct prime factors by trial division; `None` if `n` exceeds `u64`.
fn prime_factors(n: &BigInt) -> Option<Vec<u64>> {
    let mut n = n.abs().to_u64()?;
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    Some(out)
}

/// Parses a start point: `a` or `a/b` for `[a : b]` on the projective line,
/// `inf` for `[1 : 0]`, or a coordinate list `[x0,x1,...]`.
pub fn parse_point(text: &str) -> Result<ProjPointQ> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::parse(1, 1, "empty start point"));
    }
    if t == "inf" || t == "infinity" {
        return ProjPointQ::from_i64s(&[1, 0]);
    }
    let offset = text.len() - text.trim_start().len();
    if t.starts_with('[') || t.contains(',') {
        let inner = t.trim_start_matches('[').trim_end_matches(']');
        let base = offset + 1 + usize::from(t.starts_with('['));
        let mut coords = Vec::new();
        let mut col = base;
        for part in inner.split(',') {
            let word = part.trim();
            let lead = part.len() - part.trim_start().len();
            let value: BigInt = word
                .parse()
                .map_err(|_| Error::parse(1, col + lead, format!("invalid coordinate `{word}`")))?;
            coords.push(value);
            col += part.len() + 1;
        }
        if coords.len() < 2 {
            return Err(Error::parse(1, base, "a projective point needs at least two coordinates"));
        }
        return ProjPointQ::normalize(coords);
    }
    let frac = parse_fraction(t, 1, offset + 1)?;
    ProjPointQ::normalize(vec![frac.num, frac.den])
}
