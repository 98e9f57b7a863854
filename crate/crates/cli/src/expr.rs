//! Path-product expressions for `verify-identity`.
//!
//! ```text
//! product := factor ('*' factor)*
//! factor  := 'I' | name '(' i ',' j ':' args ')' ['^-1']
//! name    := 'X' | 'W' | 'H' | 'C'
//! ```
//!
//! `X`, `W` and `H` take one scalar, `C` takes two. Scalars use the field's
//! syntax, so `F_9` elements may be written `[1,2]`.

use symloop::arith::{BaseField, Scalar};
use symloop::chevalley::RootA;
use symloop::loops::{c_loop, h_loop, w_loop, x_loop, PathMatrix, PathProduct};
use symloop::{Error, Result};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Splits on `sep` outside brackets and parentheses.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (k, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..k]);
                start = k + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_factor(field: BaseField, n: usize, text: &str) -> Result<Option<(PathMatrix, bool)>> {
    let (body, inverted) = match text.strip_suffix("^-1") {
        Some(b) => (b, true),
        None => (text, false),
    };
    if body == "I" {
        return Ok(None);
    }
    let open = body
        .find('(')
        .filter(|_| body.ends_with(')'))
        .ok_or_else(|| parse_err(format!("expected NAME(i,j:args), got {text:?}")))?;
    let name = &body[..open];
    let inner = &body[open + 1..body.len() - 1];
    let (root, args) = inner
        .split_once(':')
        .ok_or_else(|| parse_err(format!("missing ':' in {text:?}")))?;
    let root = RootA::parse(root)?;
    let args: Vec<Scalar> = split_top(args, ',')
        .into_iter()
        .map(|a| field.parse_scalar(a))
        .collect::<Result<_>>()?;
    let arity = |k: usize| {
        if args.len() == k {
            Ok(())
        } else {
            Err(parse_err(format!("{name} takes {k} argument(s), got {}", args.len())))
        }
    };
    let path = match name {
        "X" => {
            arity(1)?;
            x_loop(n, root, &args[0])?
        }
        "W" => {
            arity(1)?;
            w_loop(n, root, &args[0])?
        }
        "H" => {
            arity(1)?;
            h_loop(n, root, &args[0])?
        }
        "C" => {
            arity(2)?;
            c_loop(n, root, &args[0], &args[1])?
        }
        other => return Err(parse_err(format!("unknown path family {other:?}"))),
    };
    Ok(Some((path, inverted)))
}

pub fn parse_product(field: BaseField, n: usize, expr: &str) -> Result<PathProduct> {
    let compact: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(parse_err("empty expression"));
    }
    let mut product = PathProduct::new(field, n);
    for factor in split_top(&compact, '*') {
        product = match parse_factor(field, n, factor)? {
            None => product,
            Some((path, false)) => product.times(path)?,
            Some((path, true)) => product.times_inverse(path)?,
        };
    }
    Ok(product)
}

#[cfg(test)]
mod tests {
    use super::*;
    use symloop::loops::verify_path_identity;

    #[test]
    fn splits_outside_brackets() {
        assert_eq!(split_top("C(1,2:[1,2],3)*W(1,2:1)", '*'), vec!["C(1,2:[1,2],3)", "W(1,2:1)"]);
        assert_eq!(split_top("[1,2],3", ','), vec!["[1,2]", "3"]);
    }

    #[test]
    fn weyl_pair_is_trivial() {
        let q = BaseField::Rationals;
        let lhs = parse_product(q, 2, "W(1,2:2) * W(1,2:-2)").unwrap();
        let rhs = parse_product(q, 2, "I").unwrap();
        assert!(verify_path_identity(&lhs, &rhs).unwrap().holds);
        let c = parse_product(q, 2, "C(1,2:2,3)").unwrap();
        let h = parse_product(q, 2, "H(1,2:2)*H(1,2:3)*H(1,2:6)^-1").unwrap();
        assert!(verify_path_identity(&c, &h).unwrap().holds);
    }

    #[test]
    fn rejects_malformed() {
        let q = BaseField::Rationals;
        for bad in ["", "W(1,2)", "Z(1,2:1)", "C(1,2:1)", "W(1,1:2)", "W(1,2:x)"] {
            assert!(parse_product(q, 2, bad).is_err(), "{bad}");
        }
        let f9 = BaseField::finite(9).unwrap();
        assert!(parse_product(f9, 2, "C(1,2:[1,2],[0,1])").is_ok());
    }
}
