//! Depth-limited pictures of a form's topograph neighborhood.
//!
//! The sketch is the tree of oriented edges around the root edge: the root,
//! every edge reachable by at most `depth` turns ahead of it, and the same
//! fan behind it (reached by reversing the root edge first). Every node
//! carries the values flanking its edge and the value of the region ahead,
//! so the sketch contains each nearby region value exactly once.

use num_bigint::{BigInt, Sign};
use num_traits::Zero;

use crate::cursor::{TopographCursor, Turn, TurnWord};
use crate::error::{Error, Result};
use crate::form::QuadraticForm;

/// Node counts double per level; 12 levels on both sides is already a
/// sixteen-thousand-node picture.
pub const MAX_SKETCH_DEPTH: usize = 12;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SketchNode {
    pub id: usize,
    /// Index of the parent edge; `None` on the root edge.
    pub parent: Option<usize>,
    /// Turn taken from the parent; `None` on the root edge.
    pub turn: Option<Turn>,
    /// True for the fan behind the root edge.
    pub back_side: bool,
    /// Turns from the (possibly reversed) root edge to this edge.
    pub word: TurnWord,
    pub left: BigInt,
    pub right: BigInt,
    pub forward: BigInt,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TopographSketch {
    pub coeffs: (BigInt, BigInt, BigInt),
    pub depth: usize,
    pub nodes: Vec<SketchNode>,
}

impl SketchNode {
    /// An edge lies on the river exactly when its flanking values have
    /// opposite signs.
    pub fn on_river(&self) -> bool {
        (&self.left * &self.right).sign() == Sign::Minus
    }
}

fn push_subtree(
    nodes: &mut Vec<SketchNode>,
    cur: &TopographCursor,
    parent: usize,
    back_side: bool,
    word: &TurnWord,
    levels_left: usize,
) {
    if levels_left == 0 {
        return;
    }
    for turn in [Turn::L, Turn::R] {
        let mut child = cur.clone();
        child.step(turn);
        let mut child_word = word.clone();
        child_word.push(turn);
        let id = nodes.len();
        nodes.push(SketchNode {
            id,
            parent: Some(parent),
            turn: Some(turn),
            back_side,
            word: child_word.clone(),
            left: child.left_value(),
            right: child.right_value(),
            forward: child.forward_value(),
        });
        push_subtree(nodes, &child, id, back_side, &child_word, levels_left - 1);
    }
}

/// Collects the edge tree around the root edge of `q` to the given depth
/// on each side.
pub fn sketch(q: &QuadraticForm, depth: usize) -> Result<TopographSketch> {
    if depth > MAX_SKETCH_DEPTH {
        return Err(Error::Precondition(format!(
            "sketch depth {depth} exceeds the limit of {MAX_SKETCH_DEPTH}"
        )));
    }
    let root = q.cursor();
    let mut nodes = Vec::new();
    nodes.push(SketchNode {
        id: 0,
        parent: None,
        turn: None,
        back_side: false,
        word: TurnWord::new(),
        left: root.left_value(),
        right: root.right_value(),
        forward: root.forward_value(),
    });
    push_subtree(&mut nodes, &root, 0, false, &TurnWord::new(), depth);
    let mut back = root.clone();
    back.reverse();
    push_subtree(&mut nodes, &back, 0, true, &TurnWord::new(), depth);
    Ok(TopographSketch {
        coeffs: q.coeffs(),
        depth,
        nodes,
    })
}

fn elide(s: String) -> String {
    if s.len() > 14 {
        format!("{}..{}", &s[..6], &s[s.len() - 6..])
    } else {
        s
    }
}

/// Graphviz rendering: one node per edge labeled with its value triple;
/// river edges (opposite-sign flanks) and the links between them are drawn
/// in blue.
pub fn to_dot(s: &TopographSketch) -> String {
    let mut out = String::new();
    out.push_str("graph topograph {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=box, fontsize=10, fontname=\"monospace\"];\n");
    for n in &s.nodes {
        let label = format!(
            "{} | {} | {}",
            elide(n.left.to_string()),
            elide(n.right.to_string()),
            elide(n.forward.to_string())
        );
        let mut attrs = vec![format!("label=\"{label}\"")];
        if n.parent.is_none() {
            attrs.push("style=bold".into());
        }
        if n.on_river() {
            attrs.push("color=blue".into());
        }
        out.push_str(&format!("  n{} [{}];\n", n.id, attrs.join(", ")));
    }
    for n in &s.nodes {
        if let (Some(p), Some(t)) = (n.parent, n.turn) {
            let tag = if n.word.len() == 1 && n.back_side {
                format!("~{t}")
            } else {
                t.to_string()
            };
            let style = if n.on_river() && s.nodes[p].on_river() {
                ", color=blue, penwidth=2"
            } else {
                ""
            };
            out.push_str(&format!("  n{p} -- n{} [label=\"{tag}\"{style}];\n", n.id));
        }
    }
    out.push_str("}\n");
    out
}

fn node_position(n: &SketchNode, depth: usize, width: f64, height: f64) -> (f64, f64) {
    let cx = width / 2.0;
    if n.parent.is_none() {
        return (cx, height / 2.0);
    }
    let level = n.word.len();
    let dx = (width / 2.0 - 40.0) / depth.max(1) as f64;
    let x = if n.back_side {
        cx - level as f64 * dx
    } else {
        cx + level as f64 * dx
    };
    // rank of the turn word within its generation fixes the row
    let mut rank = 0usize;
    for t in n.word.iter() {
        rank = rank * 2 + usize::from(t == Turn::R);
    }
    let slots = 1usize << level;
    let y = height * (rank as f64 + 0.5) / slots as f64;
    (x, y)
}

/// Plain SVG rendering: region values ahead of each edge, root triple in
/// the middle, forward fan to the right and back fan to the left. River
/// edges are stroked in blue; edges flanked by a zero region (a lake)
/// are filled light blue.
pub fn to_svg(s: &TopographSketch) -> String {
    let depth = s.depth.max(1);
    let width = 160.0 * depth as f64 + 200.0;
    let height = (40 * (1usize << depth)) as f64 + 80.0;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" \
         viewBox=\"0 0 {:.0} {:.0}\">\n",
        width, height, width, height
    ));
    let form = QuadraticForm::new(s.coeffs.0.clone(), s.coeffs.1.clone(), s.coeffs.2.clone());
    out.push_str(&format!("  <title>topograph of {form}</title>\n"));
    let pos: Vec<(f64, f64)> = s
        .nodes
        .iter()
        .map(|n| node_position(n, s.depth, width, height))
        .collect();
    for n in &s.nodes {
        if let Some(p) = n.parent {
            let (x1, y1) = pos[p];
            let (x2, y2) = pos[n.id];
            let (stroke, width) = if n.on_river() && s.nodes[p].on_river() {
                ("#2b6cb0", "2.5")
            } else {
                ("#888", "1")
            };
            out.push_str(&format!(
                "  <line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" \
                 stroke=\"{stroke}\" stroke-width=\"{width}\"/>\n"
            ));
        }
    }
    for n in &s.nodes {
        let (x, y) = pos[n.id];
        let label = if n.parent.is_none() {
            format!(
                "{}|{}|{}",
                elide(n.left.to_string()),
                elide(n.right.to_string()),
                elide(n.forward.to_string())
            )
        } else {
            elide(n.forward.to_string())
        };
        let fill = if n.left.is_zero() || n.right.is_zero() {
            "#bee3f8"
        } else {
            "#fff"
        };
        let stroke = if n.on_river() { "#2b6cb0" } else { "#333" };
        out.push_str(&format!(
            "  <circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"14\" fill=\"{fill}\" stroke=\"{stroke}\"/>\n"
        ));
        out.push_str(&format!(
            "  <text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\" \
             font-family=\"monospace\" font-size=\"10\">{label}</text>\n",
            y + 3.5
        ));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lens_form() -> QuadraticForm {
        QuadraticForm::new(1, -2, -2)
    }

    #[test]
    fn sketch_sizes_follow_depth() {
        for (depth, expect) in [(0usize, 1usize), (1, 5), (2, 13), (3, 29)] {
            let s = sketch(&lens_form(), depth).unwrap();
            assert_eq!(s.nodes.len(), expect, "depth {depth}");
        }
        assert!(sketch(&lens_form(), MAX_SKETCH_DEPTH + 1).is_err());
    }

    #[test]
    fn sketch_values_match_walks() {
        let q = QuadraticForm::new(3, -1, 5);
        let s = sketch(&q, 3).unwrap();
        for n in &s.nodes {
            let mut cur = q.cursor();
            if n.back_side {
                cur.reverse();
            }
            cur.walk(&n.word);
            assert_eq!(cur.left_value(), n.left);
            assert_eq!(cur.right_value(), n.right);
            assert_eq!(cur.forward_value(), n.forward);
        }
    }

    #[test]
    fn parents_precede_children() {
        let s = sketch(&lens_form(), 3).unwrap();
        for n in &s.nodes {
            if let Some(p) = n.parent {
                assert!(p < n.id);
                assert_eq!(s.nodes[p].word.len() + 1, n.word.len());
            }
        }
    }

    #[test]
    fn dot_output_is_a_tree() {
        let s = sketch(&lens_form(), 2).unwrap();
        let dot = to_dot(&s);
        assert!(dot.starts_with("graph topograph {"));
        assert!(dot.trim_end().ends_with('}'));
        let links = dot.matches(" -- ").count();
        assert_eq!(links, s.nodes.len() - 1);
        assert!(dot.contains("1 | -2 | -3"), "root triple shown");
        assert!(dot.contains("~L") && dot.contains("~R"), "back fan marked");
    }

    #[test]
    fn svg_output_is_deterministic_and_complete() {
        let s = sketch(&lens_form(), 2).unwrap();
        let svg = to_svg(&s);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), s.nodes.len());
        assert_eq!(svg.matches("<line").count(), s.nodes.len() - 1);
        assert_eq!(svg, to_svg(&s));
    }

    #[test]
    fn river_edges_are_marked_only_on_indefinite_forms() {
        let s = sketch(&lens_form(), 2).unwrap();
        assert!(s.nodes[0].on_river(), "root edge of 1,-2,-2 is on the river");
        assert!(to_dot(&s).contains("color=blue"));
        assert!(to_svg(&s).contains("#2b6cb0"));

        let sum = sketch(&QuadraticForm::new(1, 0, 1), 2).unwrap();
        assert!(sum.nodes.iter().all(|n| !n.on_river()));
        assert!(!to_dot(&sum).contains("color=blue"));
        assert!(!to_svg(&sum).contains("#2b6cb0"));
    }

    #[test]
    fn lakes_are_tinted_in_svg() {
        let split = sketch(&QuadraticForm::new(0, 1, 0), 1).unwrap();
        assert!(to_svg(&split).contains("#bee3f8"));
        assert!(!to_svg(&sketch(&lens_form(), 1).unwrap()).contains("#bee3f8"));
    }

    #[test]
    fn long_labels_are_elided() {
        let q = QuadraticForm::new(1_000_000_007i64, -2, 999_999_999_999_999i64);
        let s = sketch(&q, 1).unwrap();
        let svg = to_svg(&s);
        assert!(svg.contains(".."));
        let dot = to_dot(&s);
        assert!(dot.contains("999999..999999"));
    }
}
