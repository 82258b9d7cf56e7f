//! Grid specifications for the probe command: comma-separated items, each
//! either a single value (`0.5`, `1/3`, `1e-3`) or an inclusive exact range
//! `start:stop:step`.

use crate::rational::Rational;

/// Upper bound on the number of values one grid may expand to.
pub const MAX_GRID_LEN: usize = 100_000;

pub fn parse_grid(spec: &str) -> Result<Vec<Rational>, String> {
    let mut out = Vec::new();
    for item in spec.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err(format!("empty item in grid {spec:?}"));
        }
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [single] => out.push(parse_value(single)?),
            [start, stop, step] => {
                let start = parse_value(start)?;
                let stop = parse_value(stop)?;
                let step = parse_value(step)?;
                if !step.is_positive() {
                    return Err(format!("range step must be positive in {item:?}"));
                }
                let mut v = start;
                while v <= stop {
                    out.push(v.clone());
                    if out.len() > MAX_GRID_LEN {
                        return Err(format!("grid {spec:?} expands past {MAX_GRID_LEN} values"));
                    }
                    v = v + &step;
                }
            }
            _ => {
                return Err(format!(
                    "grid item {item:?} is neither a value nor start:stop:step"
                ))
            }
        }
    }
    Ok(out)
}

fn parse_value(s: &str) -> Result<Rational, String> {
    s.trim().parse().map_err(|e| format!("{e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_are_exact() {
        let g = parse_grid("0.1:0.9:0.1").unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], Rational::frac(1, 10));
        assert_eq!(g[8], Rational::frac(9, 10));
    }

    #[test]
    fn lists_and_mixed() {
        let g = parse_grid("1e-2,1e-3").unwrap();
        assert_eq!(g, vec![Rational::frac(1, 100), Rational::frac(1, 1000)]);
        let g = parse_grid("1/3, 0.5:0.7:0.1").unwrap();
        assert_eq!(g.len(), 4);
    }

    #[test]
    fn errors() {
        assert!(parse_grid("").is_err());
        assert!(parse_grid("0.1,,0.2").is_err());
        assert!(parse_grid("0.1:0.2").is_err());
        assert!(parse_grid("0.1:0.9:0").is_err());
        assert!(parse_grid("abc").is_err());
        assert!(parse_grid("0:1:1e-9").is_err());
    }
}
