//! Plain-text formats for graphs, palettes, lists and decompositions.
//!
//! All formats are line oriented; `#` starts a comment and blank lines are
//! ignored.
//!
//! ```text
//! # graph: header "n m D", then one "u v" line per edge
//! 4 3 2
//! 0 1
//! 1 2
//! 2 3
//! ```
//!
//! Palettes start with `n gamma_size D` and list `v: c c c` per vertex;
//! list samples start with `ell seed` and use the same vertex lines.
//! Decompositions are `V* <count>`, a line with the sparse vertices, then
//! `C<i>: v v v` per cluster.

use std::fmt::Write as _;
use std::path::Path;

use sparsecolor_core::{Color, Decomposition, Graph, ListSample, PaletteSystem};

use crate::error::{io_err, parse_err, LabError, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn numbers<T: std::str::FromStr>(line: usize, s: &str) -> Result<Vec<T>> {
    s.split_whitespace()
        .map(|w| w.parse().map_err(|_| parse_err(line, format!("not a number: {w:?}"))))
        .collect()
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(io_err(path))
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(io_err(path))
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {} {}\n", g.n(), g.edge_count(), g.degree_bound());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(0, "empty graph file"))?;
    let h: Vec<usize> = numbers(hl, header)?;
    let [n, m, d] = h[..] else {
        return Err(parse_err(hl, "graph header must be \"n m D\""));
    };
    let mut edges = Vec::with_capacity(m);
    for (ln, l) in lines {
        match numbers::<usize>(ln, l)?[..] {
            [u, v] => edges.push((u, v)),
            _ => return Err(parse_err(ln, "edge lines must be \"u v\"")),
        }
    }
    if edges.len() != m {
        return Err(parse_err(hl, format!("header promises {m} edges, found {}", edges.len())));
    }
    let g = Graph::from_edges(n, &edges)?;
    if g.edge_count() != m {
        return Err(parse_err(hl, "duplicate edges"));
    }
    Ok(g.with_degree_bound(d)?)
}

fn write_vertex_lists(out: &mut String, lists: &[Vec<Color>]) {
    for (v, l) in lists.iter().enumerate() {
        let _ = write!(out, "{v}:");
        for c in l {
            let _ = write!(out, " {c}");
        }
        out.push('\n');
    }
}

fn parse_vertex_lists<'a>(lines: impl Iterator<Item = (usize, &'a str)>) -> Result<Vec<Vec<Color>>> {
    let mut lists = Vec::new();
    for (ln, l) in lines {
        let (v, rest) = l.split_once(':').ok_or_else(|| parse_err(ln, "expected \"v: colors\""))?;
        let v: usize = v.trim().parse().map_err(|_| parse_err(ln, "bad vertex id"))?;
        if v != lists.len() {
            return Err(parse_err(ln, format!("expected vertex {}, found {v}", lists.len())));
        }
        let mut colors: Vec<Color> = numbers(ln, rest)?;
        colors.sort_unstable();
        lists.push(colors);
    }
    Ok(lists)
}

pub fn write_palette(p: &PaletteSystem) -> String {
    let mut out = format!("{} {} {}\n", p.n(), p.gamma_size, p.d);
    write_vertex_lists(&mut out, &p.lists);
    out
}

pub fn parse_palette(text: &str) -> Result<PaletteSystem> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(0, "empty palette file"))?;
    let [n, gamma_size, d] = numbers::<usize>(hl, header)?[..] else {
        return Err(parse_err(hl, "palette header must be \"n gamma_size D\""));
    };
    let lists = parse_vertex_lists(lines)?;
    if lists.len() != n {
        return Err(parse_err(hl, format!("header promises {n} vertices, found {}", lists.len())));
    }
    let p = PaletteSystem { gamma_size, d, lists };
    p.validate()?;
    Ok(p)
}

pub fn write_lists(l: &ListSample) -> String {
    let mut out = format!("{} {}\n", l.ell, l.seed);
    write_vertex_lists(&mut out, &l.lists);
    out
}

pub fn parse_lists(text: &str) -> Result<ListSample> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(0, "empty list file"))?;
    let [ell, seed] = numbers::<u64>(hl, header)?[..] else {
        return Err(parse_err(hl, "list header must be \"ell seed\""));
    };
    let lists = parse_vertex_lists(lines)?;
    if let Some(v) = lists.iter().position(|l| l.len() as u64 != ell) {
        return Err(LabError::Parse { line: hl, message: format!("vertex {v} does not have {ell} colors") });
    }
    Ok(ListSample { ell: ell as usize, seed, lists })
}

pub fn write_decomposition(dec: &Decomposition) -> String {
    let join = |xs: &[usize]| xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    let mut out = format!("# D = {}, eps = {}\nV* {}\n{}\n", dec.d, dec.eps, dec.sparse.len(), join(&dec.sparse));
    for (i, c) in dec.clusters.iter().enumerate() {
        let _ = writeln!(out, "C{i}: {}", join(c));
    }
    out
}

/// Reads the vertex sets back; `eps` and `D` come from the caller.
pub fn parse_decomposition(text: &str, d: usize, eps: f64) -> Result<Decomposition> {
    let mut lines = content_lines(text).peekable();
    let (hl, header) = lines.next().ok_or_else(|| parse_err(0, "empty decomposition file"))?;
    let count: usize = header
        .strip_prefix("V*")
        .and_then(|r| r.trim().parse().ok())
        .ok_or_else(|| parse_err(hl, "header must be \"V* <count>\""))?;
    let sparse: Vec<usize> = match lines.peek() {
        Some((_, l)) if !l.starts_with('C') => {
            let (ln, l) = lines.next().expect("peeked");
            numbers(ln, l)?
        }
        _ => Vec::new(),
    };
    if sparse.len() != count {
        return Err(parse_err(hl, format!("header promises {count} sparse vertices, found {}", sparse.len())));
    }
    let mut clusters = Vec::new();
    for (ln, l) in lines {
        let (_, rest) = l.split_once(':').ok_or_else(|| parse_err(ln, "expected \"C<i>: vertices\""))?;
        clusters.push(numbers(ln, rest)?);
    }
    Ok(Decomposition { sparse, clusters, eps, d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use sparsecolor_core::generators::gen_random_regular;
    use sparsecolor_core::palette::{make_palette, sample_lists, PaletteMode};

    #[test]
    fn graph_round_trip() {
        let g = gen_random_regular(30, 4, 1).unwrap();
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
        let text = "# triangle\n3 3 2\n0 1\n1 2 # last two\n0 2\n\n";
        assert_eq!(parse_graph(text).unwrap().edge_count(), 3);
    }

    #[test]
    fn graph_errors() {
        assert!(matches!(parse_graph("3 2 2\n0 1\n"), Err(LabError::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("3 1 2\n0 x\n"), Err(LabError::Parse { line: 2, .. })));
        assert!(parse_graph("3 1 2\n0 0\n").is_err());
        assert!(parse_graph("3 2 1\n0 1\n0 2\n").is_err());
    }

    #[test]
    fn palette_and_lists_round_trip() {
        let g = gen_random_regular(20, 3, 2).unwrap();
        let p = make_palette(&g, PaletteMode::RandomWide, 12, 3).unwrap();
        assert_eq!(parse_palette(&write_palette(&p)).unwrap(), p);
        let l = sample_lists(&p, 2, 4, None).unwrap();
        assert_eq!(parse_lists(&write_lists(&l)).unwrap(), l);
        assert!(parse_palette("1 3 1\n0: 0 1 2\n").is_err());
    }

    #[test]
    fn decomposition_round_trip() {
        let dec = Decomposition { sparse: vec![0, 5], clusters: vec![vec![1, 2, 3], vec![4]], eps: 0.1, d: 3 };
        assert_eq!(parse_decomposition(&write_decomposition(&dec), 3, 0.1).unwrap(), dec);
        let none = Decomposition { sparse: vec![], clusters: vec![vec![0, 1]], eps: 0.1, d: 1 };
        assert_eq!(parse_decomposition(&write_decomposition(&none), 1, 0.1).unwrap(), none);
    }
}
