//! Monomial syntax for the command line: `y^7`, `t*y^5*x`, with the
//! index fallback `x0..x4` for coordinates beyond the letter names.

use fanocheck::verify::VAR_NAMES;
use fanocheck::wps::Monomial;

pub fn parse_var(token: &str, arity: usize) -> Result<usize, String> {
    let token = token.trim();
    let idx = if let Some(pos) = VAR_NAMES.iter().position(|&v| v == token) {
        pos
    } else if let Some(rest) = token.strip_prefix('x') {
        rest.parse::<usize>().map_err(|_| format!("unknown variable {token:?}"))?
    } else {
        return Err(format!("unknown variable {token:?}"));
    };
    if idx >= arity {
        return Err(format!("variable {token:?} exceeds the {arity} coordinates"));
    }
    Ok(idx)
}

pub fn parse_var_list(tokens: &[String], arity: usize) -> Result<Vec<usize>, String> {
    let mut out = Vec::with_capacity(tokens.len());
    for t in tokens {
        let v = parse_var(t, arity)?;
        if out.contains(&v) {
            return Err(format!("repeated variable {t:?}"));
        }
        out.push(v);
    }
    out.sort_unstable();
    Ok(out)
}

pub fn parse_monomial(text: &str, arity: usize) -> Result<Monomial, String> {
    let mut exps = vec![0u32; arity];
    let text = text.trim();
    if text == "1" {
        return Ok(Monomial(exps));
    }
    for factor in text.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(format!("empty factor in {text:?}"));
        }
        let (var, exp) = match factor.split_once('^') {
            Some((v, e)) => {
                let exp: u32 =
                    e.trim().parse().map_err(|_| format!("bad exponent in {factor:?}"))?;
                (v, exp)
            }
            None => (factor, 1),
        };
        let idx = parse_var(var, arity)?;
        exps[idx] += exp;
    }
    Ok(Monomial(exps))
}

pub fn parse_monomial_list(text: &str, arity: usize) -> Result<Vec<Monomial>, String> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_monomial(s, arity))
        .collect()
}
