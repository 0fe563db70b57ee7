//! Parsing of range and list flags.

/// A closed interval `a:b` with `a <= b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Span {
    pub lo: f64,
    pub hi: f64,
}

impl Span {
    /// `steps` evenly spaced points, endpoints included. One step gives `lo`.
    pub fn linspace(self, steps: usize) -> Vec<f64> {
        if steps == 1 {
            return vec![self.lo];
        }
        (0..steps)
            .map(|i| {
                if i + 1 == steps {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * i as f64 / (steps - 1) as f64
                }
            })
            .collect()
    }
}

fn number(s: &str) -> Result<f64, String> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("not a number: {s:?}"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("not a finite number: {s:?}"))
    }
}

pub fn parse_span(s: &str) -> Result<Span, String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected a range a:b, got {s:?}"))?;
    let (lo, hi) = (number(a)?, number(b)?);
    if lo > hi {
        return Err(format!("empty range {s:?}: {lo} > {hi}"));
    }
    Ok(Span { lo, hi })
}

/// Values of `--t`, in the order given.
#[derive(Debug, Clone, PartialEq)]
pub struct TList(pub Vec<f64>);

/// Comma-separated items, each either a number or a geometric range
/// `start:stop:count`.
pub fn parse_t_list(s: &str) -> Result<TList, String> {
    let mut out = Vec::new();
    for item in s.split(',') {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [x] => out.push(number(x)?),
            [start, stop, count] => {
                let (start, stop) = (number(start)?, number(stop)?);
                let count: usize = count
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad count in {item:?}"))?;
                if count == 0 || start <= 0.0 || stop <= 0.0 {
                    return Err(format!(
                        "geometric range {item:?} needs positive endpoints and count >= 1"
                    ));
                }
                if count == 1 {
                    out.push(start);
                    continue;
                }
                let ratio = (stop / start).ln() / (count - 1) as f64;
                out.extend((0..count).map(|i| {
                    if i + 1 == count {
                        stop
                    } else {
                        start * (ratio * i as f64).exp()
                    }
                }));
            }
            _ => return Err(format!("cannot parse t item {item:?}")),
        }
    }
    Ok(TList(out))
}
