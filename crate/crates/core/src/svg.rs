//! SVG rendering of two-dimensional codes as rectangles in the unit square.

use std::fmt::Write;

use crate::code::CodeSet;
use crate::error::{NvError, Result};

/// Start and width of the k-adic interval `[0.s, 0.s + k^-|s|)`.
fn interval(s: &[u8], k: u8) -> (f64, f64) {
    let k = f64::from(k);
    let mut start = 0.0;
    let mut width = 1.0;
    for &d in s {
        width /= k;
        start += f64::from(d) * width;
    }
    (start, width)
}

/// One rectangle per tuple, coordinate 1 horizontal and coordinate 2 vertical.
pub fn tiling_svg(code: &CodeSet, size: u32) -> Result<String> {
    let sig = code.sig();
    if sig.n() != 2 {
        return Err(NvError::WrongDimension { expected: "n = 2", n: sig.n(), k: sig.k() });
    }
    let px = f64::from(size);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    )
    .unwrap();
    writeln!(out, r##"<rect x="0" y="0" width="{size}" height="{size}" fill="#ffffff"/>"##).unwrap();
    let count = code.len().max(1) as f64;
    for (i, t) in code.iter().enumerate() {
        let (x, w) = interval(t.coord(1), sig.k());
        let (y, h) = interval(t.coord(2), sig.k());
        let hue = (i as f64 * 360.0 / count).round();
        writeln!(
            out,
            r##"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="hsl({hue},65%,70%)" stroke="#333333" stroke-width="1"><title>{t}</title></rect>"##,
            x * px,
            (1.0 - y - h) * px,
            w * px,
            h * px
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntuple::Signature;

    #[test]
    fn tiles_the_square() {
        let c = CodeSet::uniform(Signature::binary(2), &[1, 1]).unwrap();
        let s = tiling_svg(&c, 100).unwrap();
        assert_eq!(s.matches("<title>").count(), 4);
        assert!(s.contains(r#"x="50.000" y="0.000" width="50.000" height="50.000""#));
        assert!(tiling_svg(&CodeSet::root(Signature::binary(1)), 100).is_err());
    }

    #[test]
    fn intervals() {
        assert_eq!(interval(&[], 2), (0.0, 1.0));
        assert_eq!(interval(&[1, 0], 2), (0.5, 0.25));
        assert_eq!(interval(&[2], 3), (2.0 / 3.0, 1.0 / 3.0));
    }
}
