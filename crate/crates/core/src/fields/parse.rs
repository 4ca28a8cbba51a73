use super::FieldDesc;
use crate::error::{Error, Result};

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

/// Index just past the parenthesis that closes the one opening at `open`.
fn matching_paren(s: &[u8], open: usize) -> Result<usize> {
    let mut depth = 0usize;
    for (i, &c) in s.iter().enumerate().skip(open) {
        match c {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth == 0 {
                    return Ok(i + 1);
                }
            }
            _ => {}
        }
    }
    Err(err(open, "unbalanced parenthesis"))
}

pub(super) fn parse_field(text: &str) -> Result<FieldDesc> {
    let s: String = text.chars().filter(|c| !c.is_whitespace() || *c == ' ').collect();
    let b = s.as_bytes();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < b.len() && b[*pos] == b' ' {
            *pos += 1;
        }
    };
    skip_ws(&mut pos);
    let mut field = match b.get(pos) {
        Some(b'Q') => {
            pos += 1;
            FieldDesc::rationals()
        }
        Some(b'F') => {
            let start = pos + 1;
            let mut end = start;
            while end < b.len() && b[end].is_ascii_digit() {
                end += 1;
            }
            let p: u64 = s[start..end].parse().map_err(|_| err(start, "expected a prime after `F`"))?;
            pos = end;
            FieldDesc::prime_field(p)?
        }
        _ => return Err(err(pos, "field must start with `Q` or `F<p>`")),
    };
    loop {
        skip_ws(&mut pos);
        if pos >= b.len() {
            return Ok(field);
        }
        if b[pos] != b'(' {
            return Err(err(pos, "expected `(`"));
        }
        let close = matching_paren(b, pos)?;
        let inner = s[pos + 1..close - 1].trim();
        if inner.starts_with('(') && inner.ends_with(')') {
            let var = inner[1..inner.len() - 1].trim();
            field = field.laurent(var)?;
        } else if let Some(arg) = inner.strip_prefix("sqrt") {
            let a = crate::cli::parse_scalar(arg.trim(), &field).map_err(|e| match e {
                Error::Parse { pos: p, msg } => err(pos + 1 + p, msg),
                other => other,
            })?;
            field = field.quad_ext(&a)?;
        } else {
            field = field.rat_func(inner)?;
        }
        pos = close;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn towers() {
        let f = parse_field("F7((x))((y))").unwrap();
        assert_eq!(f.variables(), vec!["x", "y"]);
        let k = parse_field("Q(sqrt -1)").unwrap();
        assert!(matches!(k, FieldDesc::QuadExt { .. }));
        assert!(parse_field("Q(sqrt 4)").is_err());
        assert!(parse_field("F4").is_err());
        assert!(parse_field("Q((x)").is_err());
        assert!(parse_field("R").is_err());
    }

    #[test]
    fn sqrt_of_a_variable() {
        let f = parse_field("Q((x))(sqrt x)").unwrap();
        assert_eq!(f.to_string(), "Q((x))(sqrt x)");
    }
}
