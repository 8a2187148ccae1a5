//! The shared textual grammar for polynomials: sums of `c`, `x`, `c*x`,
//! `x^k`, `c*x^k` joined by `+`/`-`, where compound coefficients are wrapped
//! in parentheses.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub negative: bool,
    /// Coefficient text with outer parentheses removed; `None` means 1.
    pub coeff: Option<String>,
    pub exponent: u64,
}

fn strip_parens(s: &str) -> &str {
    let s = s.trim();
    if s.starts_with('(') && s.ends_with(')') {
        // Only strip if the parentheses enclose the whole string.
        let mut depth = 0i32;
        for (i, ch) in s.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 && i != s.len() - 1 {
                        return s;
                    }
                }
                _ => {}
            }
        }
        return strip_parens(&s[1..s.len() - 1]);
    }
    s
}

/// Splits `s` at top-level `+` and `-` signs.
fn split_top_level(s: &str) -> Result<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    let mut negative = false;
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                current.push(ch);
            }
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse(format!("unbalanced parentheses in `{s}`")));
                }
                current.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if !current.trim().is_empty() {
                    out.push((negative, current.trim().to_string()));
                } else if !out.is_empty() || negative {
                    return Err(Error::Parse(format!("dangling sign in `{s}`")));
                }
                current.clear();
                negative = ch == '-';
            }
            c if c.is_whitespace() => {}
            _ => current.push(ch),
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in `{s}`")));
    }
    if current.trim().is_empty() {
        return Err(Error::Parse(format!("empty term in `{s}`")));
    }
    out.push((negative, current.trim().to_string()));
    Ok(out)
}

fn parse_power(s: &str, var: &str) -> Option<u64> {
    if s == var {
        return Some(1);
    }
    let rest = s.strip_prefix(var)?.strip_prefix('^')?;
    strip_parens(rest).parse().ok()
}

/// Parses a sum of monomials in `var`. Terms may repeat; the caller sums them.
pub fn parse_sum(s: &str, var: &str) -> Result<Vec<Term>> {
    if s.trim().is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut terms = Vec::new();
    for (negative, raw) in split_top_level(s)? {
        // Find the last top-level `*`.
        let mut depth = 0i32;
        let mut star = None;
        for (i, ch) in raw.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '*' if depth == 0 => star = Some(i),
                _ => {}
            }
        }
        let (coeff, tail) = match star {
            Some(i) => (Some(&raw[..i]), &raw[i + 1..]),
            None => (None, raw.as_str()),
        };
        let term = match parse_power(tail, var) {
            Some(exponent) => Term {
                negative,
                coeff: coeff.map(|c| strip_parens(c).to_string()),
                exponent,
            },
            // A constant, possibly a product such as `2*u` over F_9.
            None => Term {
                negative,
                coeff: Some(strip_parens(&raw).to_string()),
                exponent: 0,
            },
        };
        if term.coeff.as_deref() == Some("") {
            return Err(Error::Parse(format!("empty coefficient in `{raw}`")));
        }
        terms.push(term);
    }
    Ok(terms)
}

/// Formats `(coefficient text, needs parentheses, exponent)` triples, already
/// in the desired order and with zero terms removed.
pub fn format_terms<I>(terms: I, var: &str) -> String
where
    I: IntoIterator<Item = (String, bool, u64)>,
{
    let parts: Vec<String> = terms
        .into_iter()
        .map(|(c, parens, e)| {
            let c = if parens { format!("({c})") } else { c };
            match (c.as_str(), e) {
                (_, 0) => c,
                ("1", 1) => var.to_string(),
                ("1", _) => format!("{var}^{e}"),
                (_, 1) => format!("{c}*{var}"),
                _ => format!("{c}*{var}^{e}"),
            }
        })
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

/// Formats integer-coefficient terms (used for `F_q` elements in `u`).
pub fn format_sum<I>(terms: I, var: &str) -> String
where
    I: IntoIterator<Item = (String, u64)>,
{
    format_terms(terms.into_iter().map(|(c, e)| (c, false, e)), var)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_terms() {
        let t = parse_sum("T^3+2*T-1", "T").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[0], Term { negative: false, coeff: None, exponent: 3 });
        assert_eq!(t[1], Term { negative: false, coeff: Some("2".into()), exponent: 1 });
        assert_eq!(t[2], Term { negative: true, coeff: Some("1".into()), exponent: 0 });
    }

    #[test]
    fn parenthesized_coefficients() {
        let t = parse_sum("(u+1)*T^2+u*T+(u)", "T").unwrap();
        assert_eq!(t[0].coeff.as_deref(), Some("u+1"));
        assert_eq!(t[1].coeff.as_deref(), Some("u"));
        assert_eq!(t[2].exponent, 0);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_sum("", "T").is_err());
        assert!(parse_sum("T++1", "T").is_err());
        assert!(parse_sum("(T+1", "T").is_err());
        use crate::poly::Parse;
        let a = crate::polyring::ring_a(&crate::ffield::Fq::prime(3).unwrap());
        assert!(a.parse_elem("2*Y").is_err());
        assert!(a.parse_elem("T+2*Y").is_err());
    }

    #[test]
    fn formats() {
        let s = format_terms(
            vec![("1".into(), false, 2), ("u+1".into(), true, 1), ("2".into(), false, 0)],
            "T",
        );
        assert_eq!(s, "T^2+(u+1)*T+2");
        assert_eq!(format_terms(Vec::new(), "T"), "0");
    }
}
