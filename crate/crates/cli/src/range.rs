//! Axis ranges: a single value, `start:stop:step` or `start:stop:logN`.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct RangeError(String);

impl fmt::Display for RangeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for RangeError {}

fn num(s: &str, what: &str, full: &str) -> Result<f64, RangeError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| RangeError(format!("bad {what} '{s}' in range '{full}'")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(RangeError(format!(
            "{what} must be finite in range '{full}'"
        )))
    }
}

/// Expands a range specification into its grid points.
pub fn parse_range(spec: &str) -> Result<Vec<f64>, RangeError> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [single] => Ok(vec![num(single, "value", spec)?]),
        [start, stop, step] => {
            let a = num(start, "start", spec)?;
            let b = num(stop, "stop", spec)?;
            if b < a {
                return Err(RangeError(format!("stop < start in range '{spec}'")));
            }
            if let Some(n) = step.trim().strip_prefix("log") {
                let n: usize = n
                    .parse()
                    .map_err(|_| RangeError(format!("bad point count '{n}' in range '{spec}'")))?;
                if n == 0 || a <= 0.0 {
                    return Err(RangeError(format!(
                        "log range needs N >= 1 and start > 0: '{spec}'"
                    )));
                }
                if n == 1 {
                    return Ok(vec![a]);
                }
                if a == b {
                    return Err(RangeError(format!(
                        "log range with N > 1 needs stop > start: '{spec}'"
                    )));
                }
                let (la, lb) = (a.ln(), b.ln());
                Ok((0..n)
                    .map(|i| match i {
                        0 => a,
                        i if i == n - 1 => b,
                        i => (la + (lb - la) * i as f64 / (n - 1) as f64).exp(),
                    })
                    .collect())
            } else {
                let h = num(step, "step", spec)?;
                if h <= 0.0 {
                    return Err(RangeError(format!("step must be > 0 in range '{spec}'")));
                }
                let n = ((b - a) / h + 1e-9).floor() as usize + 1;
                Ok((0..n).map(|i| a + h * i as f64).collect())
            }
        }
        _ => Err(RangeError(format!(
            "malformed range '{spec}' (expected VALUE, START:STOP:STEP or START:STOP:logN)"
        ))),
    }
}
