//! Function selectors: `t`, `const:<c>`, `indicator:<s>`,
//! `poly:<c0>,<c1>,...`, `t*z<k>` (covariates indexed from 1).

use ipcw_core::ipcw::BoundedFunction;

use crate::error::{HarnessError, Result};

fn grammar(selector: &str, position: usize, message: impl Into<String>) -> HarnessError {
    HarnessError::Selector {
        selector: selector.to_string(),
        position,
        message: message.into(),
    }
}

fn number(selector: &str, text: &str, position: usize) -> Result<f64> {
    let v: f64 = text.trim().parse().map_err(|_| {
        grammar(
            selector,
            position,
            format!("expected a number, found {text:?}"),
        )
    })?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(grammar(selector, position, "number must be finite"))
    }
}

/// Parses `selector` into a function on `[0, tau]` with covariates of
/// dimension `dim` in `[0, 1]`. Positions in errors are 0-based byte
/// offsets.
pub fn parse_function(selector: &str, tau: f64, dim: usize) -> Result<BoundedFunction> {
    let s = selector.trim();
    let offset = selector.len() - selector.trim_start().len();
    if s == "t" {
        return Ok(BoundedFunction::time(tau));
    }
    if let Some(rest) = s.strip_prefix("t*z") {
        let k: usize = rest
            .parse()
            .map_err(|_| grammar(selector, offset + 3, "expected a covariate index"))?;
        if k == 0 || k > dim {
            return Err(grammar(
                selector,
                offset + 3,
                format!("covariate index must be in 1..={dim}"),
            ));
        }
        return Ok(BoundedFunction::time_times_covariate(k - 1, tau));
    }
    let Some((head, args)) = s.split_once(':') else {
        return Err(grammar(
            selector,
            offset,
            "expected t, t*z<k>, const:, indicator: or poly:",
        ));
    };
    let start = offset + head.len() + 1;
    match head {
        "indicator" => Ok(BoundedFunction::indicator(number(selector, args, start)?)),
        "const" => Ok(BoundedFunction::constant(number(selector, args, start)?)),
        "poly" => {
            let mut coefficients = Vec::new();
            let mut pos = start;
            for part in args.split(',') {
                coefficients.push(number(selector, part, pos)?);
                pos += part.len() + 1;
            }
            Ok(BoundedFunction::polynomial(coefficients, tau))
        }
        _ => Err(grammar(
            selector,
            offset,
            format!("unknown function {head:?}"),
        )),
    }
}
