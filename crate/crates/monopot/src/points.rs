//! Point sources: seeded random batteries and CSV files.

use std::io::Read;

use monopot_core::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::AppError;

/// Default seed of the verification batteries.
pub const DEFAULT_SEED: u64 = 0x6d6f_6e6f;

/// `per_half` points in each half-space with `0.5 < |x| < 2` and
/// `|x0| > 0.1`, upper half first. In even dimension lower points keep
/// `r > 0.05` away from the negative axis, where the continued potentials
/// are singular.
pub fn shell_battery(m: usize, per_half: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((m as u64) << 32));
    let mut out = Vec::with_capacity(2 * per_half);
    for lower in [false, true] {
        let mut n = 0;
        while n < per_half {
            let dir: Vec<f64> = (0..=m).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
            if !(1e-3..=1.0).contains(&norm) {
                continue;
            }
            let rad = rng.gen_range(0.5..2.0);
            let x: Vec<f64> = dir.iter().map(|d| d / norm * rad).collect();
            let x0 = if lower { -x[0].abs() } else { x[0].abs() };
            let r = x[1..].iter().map(|t| t * t).sum::<f64>().sqrt();
            if x0.abs() <= 0.1 || (lower && m % 2 == 0 && r <= 0.05) {
                continue;
            }
            out.push(Point::new(x0, x[1..].to_vec()));
            n += 1;
        }
    }
    out
}

/// Parses `"x0,x1,...,xm"`.
pub fn parse_inline(m: usize, s: &str) -> Result<Point, AppError> {
    let vals = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| AppError::Usage(format!("bad point {s:?}: expected {} comma-separated numbers", m + 1)))?;
    if vals.len() != m + 1 {
        return Err(AppError::Usage(format!("point {s:?} has {} coordinates, m = {m} needs {}", vals.len(), m + 1)));
    }
    check_finite(&vals).map_err(|msg| AppError::Usage(format!("point {s:?}: {msg}")))?;
    Ok(Point::new(vals[0], vals[1..].to_vec()))
}

fn check_finite(vals: &[f64]) -> Result<(), String> {
    match vals.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(format!("coordinate {i} is not finite")),
        None => Ok(()),
    }
}

/// Reads a point file with header `x0,x1,...,xm`, one point per row.
pub fn read_csv(m: usize, path: &str, reader: impl Read) -> Result<Vec<Point>, AppError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(reader);
    let want: Vec<String> = (0..=m).map(|j| format!("x{j}")).collect();
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header != want {
        return Err(AppError::Input {
            path: path.into(),
            line: 1,
            msg: format!("header must be {}, found {}", want.join(","), header.join(",")),
        });
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let bad = |msg: String| AppError::Input { path: path.into(), line, msg };
        if rec.len() != m + 1 {
            return Err(bad(format!("expected {} fields, found {}", m + 1, rec.len())));
        }
        let vals = rec
            .iter()
            .enumerate()
            .map(|(j, f)| f.parse::<f64>().map_err(|_| bad(format!("field x{j} = {f:?} is not a number"))))
            .collect::<Result<Vec<_>, _>>()?;
        check_finite(&vals).map_err(bad)?;
        out.push(Point::new(vals[0], vals[1..].to_vec()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_is_deterministic_and_in_the_shell() {
        let a = shell_battery(3, 20, 7);
        assert_eq!(a, shell_battery(3, 20, 7));
        assert_ne!(a, shell_battery(3, 20, 8));
        assert_eq!(a.len(), 40);
        assert!(a[..20].iter().all(|p| p.x0 > 0.1) && a[20..].iter().all(|p| p.x0 < -0.1));
        assert!(a.iter().all(|p| p.norm() > 0.5 && p.norm() < 2.0));
    }

    #[test]
    fn csv_rows_are_validated_with_line_numbers() {
        let ok = "x0,x1,x2\n1,0,0\n0.5, 0.25 ,-1\n";
        let pts = read_csv(2, "p.csv", ok.as_bytes()).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[1].xvec, vec![0.25, -1.0]);
        let err = read_csv(2, "p.csv", "x0,x1,x2\n1,0,0\n1,zz,0\n".as_bytes()).unwrap_err();
        assert_eq!(err.to_string(), "p.csv:3: field x1 = \"zz\" is not a number");
        let err = read_csv(2, "p.csv", "x0,x1,x2\n1,0\n".as_bytes()).unwrap_err();
        assert!(err.to_string().starts_with("p.csv:2:"));
        let err = read_csv(2, "p.csv", "x0,y,x2\n".as_bytes()).unwrap_err();
        assert!(err.to_string().starts_with("p.csv:1: header"));
    }

    #[test]
    fn inline_points() {
        let p = parse_inline(2, "1, 0,0").unwrap();
        assert_eq!((p.x0, p.xvec.clone()), (1.0, vec![0.0, 0.0]));
        assert!(parse_inline(2, "1,0").is_err());
        assert!(parse_inline(2, "1,a,0").is_err());
        assert!(parse_inline(2, "1,inf,0").is_err());
    }
}
