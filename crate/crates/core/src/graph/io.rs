use std::fmt::Write as _;

use super::{check_edge, ColorMode, ColoredGraph, Edge};
use crate::error::{Error, Result};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| perr(line, format!("bad {what} '{tok}'")))
}

pub fn parse_graph(text: &str) -> Result<ColoredGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    let mut h = header.split_whitespace();
    let mode = match h.next() {
        Some("ecft") => ColorMode::Ecft,
        Some("vcft") => ColorMode::Vcft,
        other => return Err(perr(hline, format!("bad mode {other:?}"))),
    };
    let n: usize = field(h.next(), hline, "vertex count")?;
    let m: usize = field(h.next(), hline, "edge count")?;
    let color_count: u32 = field(h.next(), hline, "color count")?;
    if h.next().is_some() {
        return Err(perr(hline, "trailing tokens in header"));
    }

    let mut vertex_colors = Vec::new();
    if mode == ColorMode::Vcft {
        vertex_colors = vec![u32::MAX; n];
        for _ in 0..n {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| perr(hline, "missing vertex color lines"))?;
            let mut t = l.split_whitespace();
            let x: usize = field(t.next(), ln, "vertex")?;
            let c: u32 = field(t.next(), ln, "vertex color")?;
            if t.next().is_some() {
                return Err(perr(ln, "trailing tokens in vertex line"));
            }
            if x >= n {
                return Err(perr(ln, format!("vertex {x} out of range")));
            }
            if c >= color_count {
                return Err(perr(ln, format!("color {c} out of range")));
            }
            if vertex_colors[x] != u32::MAX {
                return Err(perr(ln, format!("vertex {x} colored twice")));
            }
            vertex_colors[x] = c;
        }
    }

    let mut edges = Vec::with_capacity(m);
    for id in 0..m {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| perr(hline, format!("expected {m} edges, found {id}")))?;
        let mut t = l.split_whitespace();
        let u: usize = field(t.next(), ln, "endpoint")?;
        let v: usize = field(t.next(), ln, "endpoint")?;
        let w: f64 = field(t.next(), ln, "weight")?;
        let c = match mode {
            ColorMode::Ecft => Some(field::<u32>(t.next(), ln, "edge color")?),
            ColorMode::Vcft => None,
        };
        if t.next().is_some() {
            let msg = if mode == ColorMode::Vcft {
                "vcft edge carries a color field"
            } else {
                "trailing tokens in edge line"
            };
            return Err(perr(ln, msg));
        }
        check_edge(mode, n, color_count, u, v, w, c).map_err(|msg| perr(ln, msg))?;
        edges.push(Edge {
            id,
            u,
            v,
            weight: w,
            color: c,
        });
    }
    if let Some((ln, _)) = lines.next() {
        return Err(perr(ln, "unexpected extra line"));
    }
    Ok(ColoredGraph::from_parts(
        mode,
        n,
        color_count,
        edges,
        vertex_colors,
    ))
}

pub fn serialize_graph(g: &ColoredGraph) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} {} {} {}",
        g.mode().as_str(),
        g.n(),
        g.m(),
        g.color_count()
    );
    if g.mode() == ColorMode::Vcft {
        for (x, c) in g.vertex_colors().iter().enumerate() {
            let _ = writeln!(s, "{x} {c}");
        }
    }
    for e in g.edges() {
        match e.color {
            Some(c) => {
                let _ = writeln!(s, "{} {} {:?} {}", e.u, e.v, e.weight, c);
            }
            None => {
                let _ = writeln!(s, "{} {} {:?}", e.u, e.v, e.weight);
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ecft_path() {
        let g = parse_graph("ecft 3 2 2\n0 1 1.0 0\n1 2 2.0 1\n").unwrap();
        assert_eq!((g.n(), g.m(), g.color_count()), (3, 2, 2));
        assert_eq!(g.edge(1).color, Some(1));
    }

    #[test]
    fn parses_vcft_with_comments() {
        let g = parse_graph("# names: a b\nvcft 2 1 1\n0 0\n1 0 # second\n0 1 1.0\n").unwrap();
        assert_eq!(g.vertex_color(1), 0);
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_graph("ecft 2 1 1\n0 0 1.0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_graph("vcft 2 1 1\n0 0\n1 0\n0 1 1.0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
        let err = parse_graph("ecft 2 1 1\n0 1 -1 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_graph("ecft 2 1 1\n0 1 1 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(parse_graph("xcft 2 1 1\n").is_err());
    }

    #[test]
    fn round_trip_canonical() {
        let text = "ecft 3 2 2\n0 1 1.5 0\n1 2 2.0 1\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(serialize_graph(&g), text);
        assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
    }
}
