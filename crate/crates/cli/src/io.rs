use crate::error::{CliError, Result};
use bregkern_core::{CoordinateTag, Point};
use std::fs;
use std::io::Write;
use std::path::Path;

/// Reads a point file: one point per line as `tag;v1,v2,...`, where bare
/// lines without a tag fall back to `default_tag`. Blank lines and lines
/// starting with `#` are skipped.
pub fn ingest_points(path: &Path, default_tag: &CoordinateTag) -> Result<Vec<Point>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        let (tag, values) = match line.split_once(';') {
            Some((tag, rest)) => {
                let tag = tag.trim();
                if tag.is_empty() {
                    return Err(CliError::parse(path, lineno, "empty coordinate tag before ';'"));
                }
                (CoordinateTag::new(tag), rest)
            }
            None => (default_tag.clone(), line),
        };
        let coords = parse_csv_floats(values)
            .map_err(|msg| CliError::parse(path, lineno, msg))?;
        if coords.is_empty() {
            return Err(CliError::parse(path, lineno, "no coordinates on line"));
        }
        points.push(Point::new(tag, coords)?);
    }
    if points.is_empty() {
        return Err(CliError::invalid(format!("{}: no points found", path.display())));
    }
    Ok(points)
}

fn parse_csv_floats(text: &str) -> std::result::Result<Vec<f64>, String> {
    text.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<f64>().map_err(|_| format!("invalid number '{tok}'"))
        })
        .collect()
}

/// Reads a histogram file (one nonnegative count per line), applies additive
/// smoothing of 1e-8 per bin, and normalizes to a probability vector.
pub fn ingest_histogram(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut counts = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        let v: f64 = line
            .parse()
            .map_err(|_| CliError::parse(path, lineno, format!("invalid count '{line}'")))?;
        if !v.is_finite() || v < 0.0 {
            return Err(CliError::parse(path, lineno, format!("count must be finite and >= 0, got {v}")));
        }
        counts.push(v);
    }
    if counts.is_empty() {
        return Err(CliError::invalid(format!("{}: empty histogram", path.display())));
    }
    Ok(normalize_counts(&counts))
}

/// Additive 1e-8 smoothing followed by normalization. Keeps every bin
/// strictly positive so the result lies in the open simplex.
pub fn normalize_counts(counts: &[f64]) -> Vec<f64> {
    let smoothed: Vec<f64> = counts.iter().map(|c| c + 1e-8).collect();
    let total: f64 = smoothed.iter().sum();
    smoothed.into_iter().map(|c| c / total).collect()
}

/// Reads a binary (P5) PGM image with maxval <= 255 and returns the
/// 256-bin histogram of its pixel values as raw counts.
pub fn ingest_pgm_histogram(path: &Path) -> Result<Vec<f64>> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let mut pos = 0usize;

    let magic = read_pgm_token(path, &bytes, &mut pos)?;
    if magic != "P5" {
        return Err(CliError::invalid(format!(
            "{}: expected binary PGM magic 'P5', found '{magic}'",
            path.display()
        )));
    }
    let width: usize = parse_pgm_number(path, &read_pgm_token(path, &bytes, &mut pos)?, "width")?;
    let height: usize = parse_pgm_number(path, &read_pgm_token(path, &bytes, &mut pos)?, "height")?;
    let maxval: usize = parse_pgm_number(path, &read_pgm_token(path, &bytes, &mut pos)?, "maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(CliError::invalid(format!(
            "{}: maxval {maxval} out of range (expected 1..=255)",
            path.display()
        )));
    }
    // The header ends with exactly one whitespace byte before the raster.
    if pos >= bytes.len() {
        return Err(CliError::invalid(format!("{}: truncated header", path.display())));
    }
    pos += 1;

    let need = width
        .checked_mul(height)
        .ok_or_else(|| CliError::invalid(format!("{}: image too large", path.display())))?;
    let raster = bytes
        .get(pos..pos + need)
        .ok_or_else(|| CliError::invalid(format!("{}: truncated raster data", path.display())))?;

    let mut counts = vec![0.0f64; 256];
    for &b in raster {
        counts[b as usize] += 1.0;
    }
    Ok(counts)
}

fn read_pgm_token(path: &Path, bytes: &[u8], pos: &mut usize) -> Result<String> {
    // Skip whitespace and '#' comments (which run to end of line).
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    if start == *pos {
        return Err(CliError::invalid(format!("{}: truncated header", path.display())));
    }
    String::from_utf8(bytes[start..*pos].to_vec())
        .map_err(|_| CliError::invalid(format!("{}: non-ASCII header token", path.display())))
}

fn parse_pgm_number(path: &Path, token: &str, what: &str) -> Result<usize> {
    token
        .parse::<usize>()
        .map_err(|_| CliError::invalid(format!("{}: invalid {what} '{token}'", path.display())))
}

/// Writes rows of floats as CSV with a header line. Every value is printed
/// with 17 significant digits so round-tripping is lossless.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    let mut file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    file.write_all(out.as_bytes()).map_err(|e| CliError::io(path, e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn temp_with(content: &str) -> tempfile::NamedTempFile {
        let f = tempfile::NamedTempFile::new().unwrap();
        fs::write(f.path(), content).unwrap();
        f
    }

    #[test]
    fn tagged_and_bare_lines() {
        let f = temp_with("# header\nlambda;0.0,1.0\n\n2.5, -1.5\n");
        let pts = ingest_points(f.path(), &CoordinateTag::theta()).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].coords, CoordinateTag::lambda());
        assert_eq!(pts[0].data, vec![0.0, 1.0]);
        assert_eq!(pts[1].coords, CoordinateTag::theta());
        assert_eq!(pts[1].data, vec![2.5, -1.5]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let f = temp_with("1.0,2.0\nfoo,2.0\n");
        let err = ingest_points(f.path(), &CoordinateTag::theta()).unwrap_err();
        assert!(err.to_string().contains(":2:"), "{err}");

        let f = temp_with(";1.0\n");
        let err = ingest_points(f.path(), &CoordinateTag::theta()).unwrap_err();
        assert!(err.to_string().contains("empty coordinate tag"), "{err}");

        let f = temp_with("# only comments\n");
        assert!(ingest_points(f.path(), &CoordinateTag::theta()).is_err());
    }

    #[test]
    fn histogram_smoothing_and_normalization() {
        let f = temp_with("1\n1\n2\n");
        let probs = ingest_histogram(f.path()).unwrap();
        assert_eq!(probs.len(), 3);
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((probs[0] - 0.25).abs() < 1e-7);
        assert!((probs[2] - 0.5).abs() < 1e-7);

        // Zero bins stay strictly positive thanks to the smoothing.
        let f = temp_with("0\n4\n");
        let probs = ingest_histogram(f.path()).unwrap();
        assert!(probs[0] > 0.0 && probs[0] < 1e-8);

        let f = temp_with("3\n-1\n");
        assert!(ingest_histogram(f.path()).is_err());
    }

    #[test]
    fn uniform_counts_normalize_uniformly() {
        let probs = normalize_counts(&vec![7.0; 256]);
        for p in probs {
            assert!((p - 1.0 / 256.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pgm_header_comments_and_counts() {
        let f = tempfile::NamedTempFile::new().unwrap();
        let mut bytes = b"P5\n# comment line\n3 # inline\n2\n255\n".to_vec();
        bytes.extend_from_slice(&[5, 5, 5, 0, 255, 5]);
        fs::write(f.path(), &bytes).unwrap();
        let counts = ingest_pgm_histogram(f.path()).unwrap();
        assert_eq!(counts[5], 4.0);
        assert_eq!(counts[0], 1.0);
        assert_eq!(counts[255], 1.0);
        assert_eq!(counts.iter().sum::<f64>(), 6.0);
    }

    #[test]
    fn pgm_rejects_bad_inputs() {
        let write_bytes = |bytes: &[u8]| {
            let f = tempfile::NamedTempFile::new().unwrap();
            fs::write(f.path(), bytes).unwrap();
            f
        };
        // Wrong magic.
        let f = write_bytes(b"P2\n2 1\n255\n99");
        assert!(ingest_pgm_histogram(f.path()).is_err());
        // Maxval above one byte.
        let f = write_bytes(b"P5\n2 1\n65535\n\x00\x00\x00\x00");
        assert!(ingest_pgm_histogram(f.path()).is_err());
        // Truncated raster.
        let f = write_bytes(b"P5\n4 4\n255\n\x01\x02");
        assert!(ingest_pgm_histogram(f.path()).is_err());
    }

    #[test]
    fn csv_roundtrips_doubles() {
        let f = tempfile::NamedTempFile::new().unwrap();
        let rows = vec![vec![std::f64::consts::PI, -0.1], vec![1e-300, 3.0]];
        write_csv(f.path(), &["a", "b"], &rows).unwrap();
        let text = fs::read_to_string(f.path()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("a,b"));
        let parsed: Vec<Vec<f64>> = lines
            .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
            .collect();
        assert_eq!(parsed, rows);
    }
}
