//! Chord diagrams of words in `L(n)`: points `1..n` on a line and, for every
//! bracket, an arc from its smallest to its largest index.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::expr::{is_in_l, Expr};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Svg,
    Ascii,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "svg" => Ok(Format::Svg),
            "ascii" => Ok(Format::Ascii),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

fn require_l(e: &Expr) -> Result<usize> {
    let n = e.arity()?;
    if !is_in_l(e)? {
        return Err(Error::NotInL(e.to_string()));
    }
    Ok(n)
}

/// `(min, max)` of every bracket, in post order; the root comes last.
pub fn chords_of(e: &Expr) -> Result<Vec<(u32, u32)>> {
    require_l(e)?;
    let mut out = Vec::new();
    e.visit_spans(&mut |_, s| out.push((s.lo, s.hi)));
    Ok(out)
}

pub fn render(e: &Expr, format: Format) -> Result<String> {
    match format {
        Format::Svg => render_svg(e),
        Format::Ascii => render_ascii(e),
    }
}

/// Width `40(n+1)`, height `20(n+2)`, baseline at `y = 20(n+1)`, point `i`
/// at `x = 40i`, and a semicircle of radius `20(hi-lo)` per chord.
pub fn render_svg(e: &Expr) -> Result<String> {
    let n = require_l(e)? as u32;
    let chords = chords_of(e)?;
    let (width, height, base) = (40 * (n + 1), 20 * (n + 2), 20 * (n + 1));
    let mut svg = String::new();
    writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(svg, "  <title>{e}</title>").unwrap();
    writeln!(svg, r##"  <line x1="20" y1="{base}" x2="{}" y2="{base}" stroke="#999" stroke-width="1"/>"##, width - 20)
        .unwrap();
    for (lo, hi) in &chords {
        let r = 20 * (hi - lo);
        writeln!(
            svg,
            r#"  <path d="M {} {base} A {r} {r} 0 0 1 {} {base}" fill="none" stroke="black" stroke-width="1.5"/>"#,
            40 * lo,
            40 * hi
        )
        .unwrap();
    }
    for i in 1..=n {
        writeln!(svg, r#"  <circle cx="{}" cy="{base}" r="3" fill="black"/>"#, 40 * i).unwrap();
        writeln!(svg, r#"  <text x="{}" y="{}" font-size="12" text-anchor="middle">{i}</text>"#, 40 * i, base + 15)
            .unwrap();
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// One row per chord, outermost first, drawn over columns `1..n`.
pub fn render_ascii(e: &Expr) -> Result<String> {
    let n = require_l(e)? as u32;
    let mut chords = chords_of(e)?;
    chords.sort_by_key(|&(lo, hi)| (std::cmp::Reverse(hi - lo), lo));
    let col = |i: u32| 4 * (i as usize - 1);
    let width = col(n) + 1;
    let mut out = String::new();
    for (lo, hi) in chords {
        let mut row = vec![' '; width];
        for i in 1..=n {
            row[col(i)] = '.';
        }
        for k in col(lo) + 1..col(hi) {
            if k % 4 != 0 {
                row[k] = '-';
            }
        }
        row[col(lo)] = 'o';
        row[col(hi)] = 'o';
        let line: String = row.into_iter().collect();
        writeln!(out, "{}", line.trim_end()).unwrap();
    }
    let mut axis = vec![' '; width + 2];
    for i in 1..=n {
        for (k, ch) in i.to_string().chars().enumerate() {
            axis[col(i) + k] = ch;
        }
    }
    writeln!(out, "{}", axis.into_iter().collect::<String>().trim_end()).unwrap();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_l;
    use crate::expr::{is_connected, is_prime, parse};

    fn e(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn chords_of_examples() {
        assert_eq!(chords_of(&e("[[x1,x3],[[x2,x4],x5]]")).unwrap(), [(1, 3), (2, 4), (2, 5), (1, 5)]);
        assert_eq!(chords_of(&e("[[[x1,x3],[x2,x4]],x5]")).unwrap(), [(1, 3), (2, 4), (1, 4), (1, 5)]);
        assert_eq!(chords_of(&e("[x1,x2]")).unwrap(), [(1, 2)]);
        assert!(chords_of(&e("[x2,x1]")).is_err());
    }

    #[test]
    fn svg_is_deterministic_with_one_arc_per_chord() {
        let one = render(&e("[x1,x2]"), Format::Svg).unwrap();
        assert_eq!(one.matches("<path").count(), 1);
        assert!(one.contains(r#"width="120" height="80""#));
        assert!(one.contains(r#"<path d="M 40 60 A 20 20 0 0 1 80 60""#));
        let w = e("[[x1,x3],[[x2,x4],x5]]");
        assert_eq!(render(&w, Format::Svg).unwrap(), render(&w, Format::Svg).unwrap());
        assert_eq!(render(&w, Format::Svg).unwrap().matches("<path").count(), 4);
    }

    #[test]
    fn ascii_art() {
        let art = render(&e("[[x1,x3],[[x2,x4],x5]]"), Format::Ascii).unwrap();
        let expected = "\
o---.---.---.---o
.   o---.---.---o
o---.---o   .   .
.   o---.---o   .
1   2   3   4   5
";
        assert_eq!(art, expected);
    }

    #[test]
    fn unknown_format() {
        assert_eq!("png".parse::<Format>(), Err(Error::UnknownFormat("png".into())));
    }

    #[test]
    fn primality_is_visible_in_chords() {
        // a bracket is connected iff its leaf count fills its chord's range
        for n in 2..=6 {
            for w in enumerate_l(n).unwrap() {
                let brackets = w.brackets();
                let chords = chords_of(&w).unwrap();
                let filled: Vec<bool> = brackets
                    .iter()
                    .zip(&chords)
                    .map(|(b, &(lo, hi))| b.leaf_count() as u32 == hi - lo + 1)
                    .collect();
                for (b, f) in brackets.iter().zip(&filled) {
                    assert_eq!(is_connected(b).unwrap(), *f);
                }
                let only_root = filled.iter().filter(|&&f| f).count() == 1;
                assert_eq!(is_prime(&w).unwrap(), only_root);
            }
        }
    }
}
