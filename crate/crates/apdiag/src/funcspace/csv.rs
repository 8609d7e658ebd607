//! CSV serialization of sampled functions.
//!
//! Format: header `t,re_1,im_1,...,re_d,im_d`, one row per grid point,
//! every float printed with 17 significant digits so that write/read/write
//! reproduces the text exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_complex::Complex;

use super::sampled::{DomainKind, SampledFunction};
use super::FuncSpaceError;
use crate::scalar::{real, Real};

/// Write a sampled function as CSV.
pub fn write_csv<T: Real, W: Write>(f: &SampledFunction<T>, mut w: W) -> std::io::Result<()> {
    write!(w, "t")?;
    for k in 1..=f.dim() {
        write!(w, ",re_{k},im_{k}")?;
    }
    writeln!(w)?;
    for i in 0..f.len() {
        write!(w, "{:.16e}", f.times()[i])?;
        for z in f.row(i) {
            write!(w, ",{:.16e},{:.16e}", z.re, z.im)?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Write to a file path (non-atomic; the CLI layers atomicity on top).
pub fn write_csv_path<T: Real>(
    f: &SampledFunction<T>,
    path: impl AsRef<Path>,
) -> std::io::Result<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    write_csv(f, &mut w)?;
    w.flush()
}

/// Read a sampled function from CSV. The domain kind is inferred from the
/// first time stamp: grids starting at (numerically) zero are half-line.
pub fn read_csv<T: Real, R: BufRead>(r: R) -> Result<SampledFunction<T>, FuncSpaceError> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| FuncSpaceError::Csv {
            row: 0,
            message: "empty input".into(),
        })?
        .map_err(FuncSpaceError::Io)?;
    let cols: Vec<&str> = header.trim().split(',').collect();
    if cols.len() < 3 || cols.len() % 2 == 0 || cols[0] != "t" {
        return Err(FuncSpaceError::Csv {
            row: 0,
            message: format!("malformed header '{header}'"),
        });
    }
    let dim = (cols.len() - 1) / 2;
    for k in 0..dim {
        if cols[1 + 2 * k] != format!("re_{}", k + 1) || cols[2 + 2 * k] != format!("im_{}", k + 1)
        {
            return Err(FuncSpaceError::Csv {
                row: 0,
                message: format!("malformed header '{header}'"),
            });
        }
    }

    let mut times: Vec<T> = Vec::new();
    let mut data: Vec<Complex<T>> = Vec::new();
    for (idx, line) in lines.enumerate() {
        let row = idx + 1;
        let line = line.map_err(FuncSpaceError::Io)?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 1 + 2 * dim {
            return Err(FuncSpaceError::Csv {
                row,
                message: format!("expected {} fields, found {}", 1 + 2 * dim, fields.len()),
            });
        }
        let mut parsed = Vec::with_capacity(fields.len());
        for f in &fields {
            let v: f64 = f.trim().parse().map_err(|_| FuncSpaceError::Csv {
                row,
                message: format!("unparsable number '{f}'"),
            })?;
            if !v.is_finite() {
                return Err(FuncSpaceError::Csv {
                    row,
                    message: "non-finite value".into(),
                });
            }
            parsed.push(real::<T>(v));
        }
        times.push(parsed[0]);
        for k in 0..dim {
            data.push(Complex::new(parsed[1 + 2 * k], parsed[2 + 2 * k]));
        }
    }

    if times.len() < 2 {
        return Err(FuncSpaceError::Csv {
            row: times.len(),
            message: "need at least two grid points".into(),
        });
    }
    let dt = times[1] - times[0];
    if dt <= T::zero() {
        return Err(FuncSpaceError::Csv {
            row: 2,
            message: "time stamps must be strictly increasing".into(),
        });
    }
    let tol = dt * real(1e-6);
    for i in 1..times.len() {
        if ((times[i] - times[i - 1]) - dt).abs() > tol {
            return Err(FuncSpaceError::Csv {
                row: i + 1,
                message: "non-uniform grid spacing".into(),
            });
        }
    }
    let domain = if times[0].abs() < dt / real(2.0) {
        DomainKind::HalfLine
    } else {
        DomainKind::WholeLine
    };
    SampledFunction::from_parts(domain, times, dt, dim, data, None)
}

/// Read from a file path.
pub fn read_csv_path<T: Real>(path: impl AsRef<Path>) -> Result<SampledFunction<T>, FuncSpaceError> {
    let file = File::open(path).map_err(FuncSpaceError::Io)?;
    read_csv(BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::generate::make_trig_polynomial;
    use crate::funcspace::sampled::GridSpec;

    fn roundtrip_text(f: &SampledFunction<f64>) -> String {
        let mut buf = Vec::new();
        write_csv(f, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn csv_roundtrip_is_bit_stable() {
        let grid = GridSpec::whole_line(2.0, 0.01);
        let f = make_trig_polynomial(
            &[1.0, std::f64::consts::SQRT_2],
            &[
                vec![Complex::new(0.3, -0.7)],
                vec![Complex::new(-1.0, 0.25)],
            ],
            &grid,
        )
        .unwrap();
        let text1 = roundtrip_text(&f);
        let g: SampledFunction<f64> = read_csv(text1.as_bytes()).unwrap();
        let text2 = roundtrip_text(&g);
        assert_eq!(text1, text2);
        assert_eq!(g.domain(), DomainKind::WholeLine);
        assert_eq!(g.dim(), 1);
        assert_eq!(g.len(), f.len());
    }

    #[test]
    fn csv_reports_bad_rows() {
        let text = "t,re_1,im_1\n0.0,1.0,0.0\n0.5,NaN,0.0\n";
        let err = read_csv::<f64, _>(text.as_bytes()).unwrap_err();
        match err {
            FuncSpaceError::Csv { row, message } => {
                assert_eq!(row, 2);
                assert!(message.contains("non-finite"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn csv_rejects_bad_header_and_ragged_rows() {
        assert!(read_csv::<f64, _>("x,y\n1,2\n".as_bytes()).is_err());
        let text = "t,re_1,im_1\n0.0,1.0,0.0\n0.5,1.0\n";
        let err = read_csv::<f64, _>(text.as_bytes()).unwrap_err();
        match err {
            FuncSpaceError::Csv { row, .. } => assert_eq!(row, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn half_line_inference() {
        let text = "t,re_1,im_1\n0.0000000000000000e0,1.0,0.0\n1.0000000000000000e-1,1.0,0.0\n";
        let f: SampledFunction<f64> = read_csv(text.as_bytes()).unwrap();
        assert_eq!(f.domain(), DomainKind::HalfLine);
    }

    #[test]
    fn multidimensional_roundtrip() {
        let f = SampledFunction::from_fn(DomainKind::HalfLine, 0.0, 0.5, 4, 2, |t, out| {
            out[0] = Complex::new(t, -t);
            out[1] = Complex::new(2.0 * t, 0.5);
        })
        .unwrap();
        let text = roundtrip_text(&f);
        assert!(text.starts_with("t,re_1,im_1,re_2,im_2\n"));
        let g: SampledFunction<f64> = read_csv(text.as_bytes()).unwrap();
        assert_eq!(g.dim(), 2);
        assert_eq!(roundtrip_text(&g), text);
    }
}
