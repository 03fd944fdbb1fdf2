//! Value lists for scan axes: `start:stop:count` (inclusive, evenly
//! spaced), a comma list `0.5,1,2`, or a single number.

use crate::document::ParseError;

pub const MAX_COUNT: usize = 100_000;

fn number(s: &str) -> Result<f64, ParseError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| ParseError(format!("not a number: {:?}", s.trim())))?;
    if !v.is_finite() {
        return Err(ParseError(format!("not finite: {:?}", s.trim())));
    }
    Ok(v)
}

pub fn parse_range(spec: &str) -> Result<Vec<f64>, ParseError> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [start, stop, count] => {
            let (start, stop) = (number(start)?, number(stop)?);
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| ParseError(format!("bad count: {:?}", count.trim())))?;
            if count == 0 || count > MAX_COUNT {
                return Err(ParseError(format!("count must be in 1..={MAX_COUNT}, got {count}")));
            }
            if count == 1 {
                return Ok(vec![start]);
            }
            let n = (count - 1) as f64;
            Ok((0..count)
                .map(|k| {
                    if k == count - 1 {
                        stop
                    } else {
                        start + (stop - start) * (k as f64) / n
                    }
                })
                .collect())
        }
        [list] => {
            if list.trim().is_empty() {
                return Err(ParseError("empty range".into()));
            }
            list.split(',').map(number).collect()
        }
        _ => Err(ParseError(format!("expected start:stop:count or a list, got {spec:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_range("0:1:11").unwrap()[3], 0.3);
        assert_eq!(parse_range("0:1:11").unwrap().len(), 11);
        assert_eq!(parse_range("0.5, 1,2").unwrap(), vec![0.5, 1.0, 2.0]);
        assert_eq!(parse_range("7").unwrap(), vec![7.0]);
        assert_eq!(parse_range("2:3:1").unwrap(), vec![2.0]);
        assert_eq!(parse_range("1:0:3").unwrap(), vec![1.0, 0.5, 0.0]);
    }

    #[test]
    fn errors() {
        for bad in ["", "a", "1:2", "1:2:0", "1:2:x", "1:2:3:4", "inf", "1,,2", "0:1:1000001"] {
            assert!(parse_range(bad).is_err(), "{bad:?}");
        }
    }
}
