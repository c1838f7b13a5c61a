//! Arc diagrams: parsing, oriented-surgery validity, steps, and the quadrangulated surface.
//!
//! Places are numbered `1..=2k` along segment 1, then segment 2, and so on. Labels of
//! matched pairs are `1..=k`. Every downstream module uses this numbering.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::sets::MAX_BITS;

/// Structural defects of a `(segment_sizes, matching)` pair.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("no segments given")]
    NoSegments,
    #[error("segment {segment} has no places")]
    EmptySegment { segment: usize },
    #[error("segments hold {places} places but the matching lists {matched}")]
    LengthMismatch { places: usize, matched: usize },
    #[error("odd number of places ({0})")]
    OddPlaces(usize),
    #[error("label {label} is outside 1..={k}")]
    LabelOutOfRange { label: usize, k: usize },
    #[error("label {label} occurs {count} times (expected exactly 2)")]
    LabelCount { label: usize, count: usize },
    #[error("{0} matched pairs exceeds the supported maximum of {max}", max = MAX_BITS / 2)]
    TooManyPairs(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Interior,
    Exterior,
}

/// A sub-interval of a segment between consecutive places, or between a segment end and
/// its extreme place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Step {
    /// Global index in segment-major, position-minor order.
    pub id: usize,
    /// 1-based segment index.
    pub segment: usize,
    /// Position within the segment: `0` is below the first place, `n` above the last.
    pub position: usize,
    pub kind: StepKind,
    /// Place at the lower end of the step, if any.
    pub lower: Option<usize>,
    /// Place at the upper end of the step, if any.
    pub upper: Option<usize>,
    /// Index among interior steps, for interior steps.
    pub interior_index: Option<usize>,
}

/// Outcome of performing oriented surgery at every matched pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum SurgeryVerdict {
    Ok,
    /// A closed component. Each consecutive `(a, b)` pair in `circle` is a sub-arc of a
    /// segment running from place `a` up to place `b`; after `b` the circle jumps to the
    /// twin of `b`, which is the next entry.
    Invalid {
        circle: Vec<usize>,
    },
}

impl SurgeryVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, SurgeryVerdict::Ok)
    }
}

/// A sequence of oriented segments with `2k` places matched in pairs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcDiagram {
    segment_sizes: Vec<usize>,
    matching: Vec<usize>,
    // derived, indexed by place (slot 0 unused)
    segment_of: Vec<usize>,
    twin: Vec<usize>,
    interior_after: Vec<Option<usize>>,
    interior_lower: Vec<usize>,
}

impl fmt::Debug for ArcDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ArcDiagram{{{:?},{:?}}}",
            self.segment_sizes, self.matching
        )
    }
}

impl fmt::Display for ArcDiagram {
    /// The text file format, without comments.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(f, "segments: {}", join(&self.segment_sizes))?;
        writeln!(f, "matching: {}", join(&self.matching))
    }
}

impl ArcDiagram {
    /// Builds a structurally well-formed diagram. Surgery validity is not checked here.
    pub fn new(segment_sizes: Vec<usize>, matching: Vec<usize>) -> Result<Self, StructureError> {
        if segment_sizes.is_empty() {
            return Err(StructureError::NoSegments);
        }
        if let Some(i) = segment_sizes.iter().position(|&n| n == 0) {
            return Err(StructureError::EmptySegment { segment: i + 1 });
        }
        // saturating: an overflowing total can never equal the matching length
        let places = segment_sizes
            .iter()
            .fold(0usize, |acc, &n| acc.saturating_add(n));
        if places != matching.len() {
            return Err(StructureError::LengthMismatch {
                places,
                matched: matching.len(),
            });
        }
        if places % 2 != 0 {
            return Err(StructureError::OddPlaces(places));
        }
        let k = places / 2;
        if k > MAX_BITS / 2 {
            return Err(StructureError::TooManyPairs(k));
        }
        let mut counts = vec![0usize; k + 1];
        for &label in &matching {
            if label == 0 || label > k {
                return Err(StructureError::LabelOutOfRange { label, k });
            }
            counts[label] += 1;
        }
        if let Some((label, &count)) = counts.iter().enumerate().skip(1).find(|(_, &c)| c != 2) {
            return Err(StructureError::LabelCount { label, count });
        }

        let mut segment_of = vec![0; places + 1];
        let mut p = 1;
        for (j, &n) in segment_sizes.iter().enumerate() {
            for _ in 0..n {
                segment_of[p] = j + 1;
                p += 1;
            }
        }
        let mut twin = vec![0; places + 1];
        let mut first_seen = vec![0usize; k + 1];
        for p in 1..=places {
            let m = matching[p - 1];
            if first_seen[m] == 0 {
                first_seen[m] = p;
            } else {
                twin[p] = first_seen[m];
                twin[first_seen[m]] = p;
            }
        }
        let mut interior_after = vec![None; places + 1];
        let mut interior_lower = Vec::new();
        for p in 1..places {
            if segment_of[p] == segment_of[p + 1] {
                interior_after[p] = Some(interior_lower.len());
                interior_lower.push(p);
            }
        }
        Ok(Self {
            segment_sizes,
            matching,
            segment_of,
            twin,
            interior_after,
            interior_lower,
        })
    }

    /// Parses the arc-diagram text format:
    ///
    /// ```text
    /// # comments run to end of line
    /// segments: 4
    /// matching: 1 2 1 2
    /// ```
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut segments: Option<Vec<usize>> = None;
        let mut matching: Option<Vec<usize>> = None;
        let mut last_line = 0;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            };
            if line.trim().is_empty() {
                continue;
            }
            let indent = line.len() - line.trim_start().len();
            let body = line.trim_start();
            let Some(colon) = body.find(':') else {
                return Err(syntax(line_no, indent + 1, "expected `key: values`"));
            };
            let key = body[..colon].trim_end();
            let values_offset = indent + colon + 1;
            let values = parse_numbers(&line[values_offset..], line_no, values_offset)?;
            match key {
                "segments" => {
                    if segments.is_some() {
                        return Err(syntax(line_no, indent + 1, "duplicate `segments` line"));
                    }
                    if matching.is_some() {
                        return Err(syntax(
                            line_no,
                            indent + 1,
                            "`segments` must precede `matching`",
                        ));
                    }
                    if values.is_empty() {
                        return Err(syntax(
                            line_no,
                            values_offset + 1,
                            "expected at least one segment size",
                        ));
                    }
                    segments = Some(values);
                }
                "matching" => {
                    if matching.is_some() {
                        return Err(syntax(line_no, indent + 1, "duplicate `matching` line"));
                    }
                    if segments.is_none() {
                        return Err(syntax(
                            line_no,
                            indent + 1,
                            "`matching` must follow `segments`",
                        ));
                    }
                    matching = Some(values);
                }
                other => {
                    return Err(syntax(
                        line_no,
                        indent + 1,
                        format!("unknown key `{other}`"),
                    ));
                }
            }
        }
        let Some(segments) = segments else {
            return Err(syntax(last_line.max(1), 1, "missing `segments` line"));
        };
        let Some(matching) = matching else {
            return Err(syntax(last_line.max(1), 1, "missing `matching` line"));
        };
        Ok(Self::new(segments, matching)?)
    }

    pub fn segment_sizes(&self) -> &[usize] {
        &self.segment_sizes
    }

    /// Label of each place, indexed from place 1.
    pub fn matching(&self) -> &[usize] {
        &self.matching
    }

    /// Number of matched pairs.
    pub fn k(&self) -> usize {
        self.matching.len() / 2
    }

    /// Number of segments.
    pub fn l(&self) -> usize {
        self.segment_sizes.len()
    }

    pub fn place_count(&self) -> usize {
        self.matching.len()
    }

    pub fn places(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.place_count()
    }

    pub fn label(&self, place: usize) -> usize {
        self.matching[place - 1]
    }

    pub fn twin(&self, place: usize) -> usize {
        self.twin[place]
    }

    pub fn segment_of(&self, place: usize) -> usize {
        self.segment_of[place]
    }

    /// The two places carrying `label`, lower first.
    pub fn twins(&self, label: usize) -> (usize, usize) {
        let v = self
            .places()
            .find(|&p| self.label(p) == label)
            .expect("label in range");
        (v, self.twin(v))
    }

    pub fn same_segment(&self, p: usize, q: usize) -> bool {
        self.segment_of[p] == self.segment_of[q]
    }

    pub fn interior_count(&self) -> usize {
        self.interior_lower.len()
    }

    /// Interior step `[p, p+1]` directly above `place`, if it is interior.
    pub fn interior_after(&self, place: usize) -> Option<usize> {
        self.interior_after[place]
    }

    /// Interior step `[p-1, p]` directly below `place`, if it is interior.
    pub fn interior_before(&self, place: usize) -> Option<usize> {
        if place > 1 {
            self.interior_after[place - 1]
        } else {
            None
        }
    }

    /// Lower place of an interior step.
    pub fn interior_lower_place(&self, index: usize) -> usize {
        self.interior_lower[index]
    }

    /// All steps, segment-major and position-minor.
    pub fn steps(&self) -> Vec<Step> {
        let mut out = Vec::with_capacity(self.place_count() + self.l());
        let mut first = 1;
        for (j, &n) in self.segment_sizes.iter().enumerate() {
            for pos in 0..=n {
                let lower = (pos > 0).then(|| first + pos - 1);
                let upper = (pos < n).then(|| first + pos);
                let interior_index = lower.and_then(|p| upper.and(self.interior_after(p)));
                out.push(Step {
                    id: out.len(),
                    segment: j + 1,
                    position: pos,
                    kind: if interior_index.is_some() {
                        StepKind::Interior
                    } else {
                        StepKind::Exterior
                    },
                    lower,
                    upper,
                    interior_index,
                });
            }
            first += n;
        }
        out
    }

    /// Global id of the step directly above `place`.
    pub fn step_after(&self, place: usize) -> usize {
        // each earlier segment contributes one extra step
        place + self.segment_of[place] - 1
    }

    /// Global id of the step directly below `place`.
    pub fn step_before(&self, place: usize) -> usize {
        self.step_after(place) - 1
    }

    /// Performs oriented surgery at every matched pair and looks for closed components.
    ///
    /// The segments are cut at every place into sub-arcs. Surgery at `{v, w}` joins the
    /// sub-arc arriving at `v` to the sub-arc leaving `w`, and vice versa. Sub-arcs touching a
    /// segment end lie on arc components, so only the sub-arcs between consecutive places
    /// (the interior steps) can close up.
    pub fn validate(&self) -> SurgeryVerdict {
        let n = self.interior_count();
        let mut on_arc = vec![false; n];
        // walk every component that starts at the bottom of a segment
        let mut first = 1;
        for &size in &self.segment_sizes {
            let mut place = first;
            loop {
                // we arrive at `place` from below, then leave from its twin
                let next = self.twin(place);
                match self.interior_after(next) {
                    Some(i) => {
                        if on_arc[i] {
                            break;
                        }
                        on_arc[i] = true;
                        place = next + 1;
                    }
                    None => break,
                }
            }
            first += size;
        }
        match (0..n).find(|&i| !on_arc[i]) {
            None => SurgeryVerdict::Ok,
            Some(start) => {
                let mut circle = Vec::new();
                let mut i = start;
                loop {
                    let lower = self.interior_lower_place(i);
                    circle.push(lower);
                    circle.push(lower + 1);
                    let next = self.twin(lower + 1);
                    i = self
                        .interior_after(next)
                        .expect("a closed component never meets a segment end");
                    if i == start {
                        break;
                    }
                }
                SurgeryVerdict::Invalid { circle }
            }
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// The quadrangulated surface obtained by thickening each matched pair into a square.
    pub fn to_quad_surface(&self) -> Result<QuadSurface, InvalidDiagram> {
        match self.validate() {
            SurgeryVerdict::Ok => Ok(QuadSurface::build(self)),
            SurgeryVerdict::Invalid { circle } => Err(InvalidDiagram { circle }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("oriented surgery produces a closed loop through places {circle:?}")]
pub struct InvalidDiagram {
    pub circle: Vec<usize>,
}

fn parse_numbers(s: &str, line: usize, offset: usize) -> Result<Vec<usize>, ParseError> {
    let mut out = Vec::new();
    let mut chars = s.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let start = i;
        let mut end = i;
        while let Some(&(j, c)) = chars.peek() {
            if c.is_whitespace() {
                break;
            }
            end = j + c.len_utf8();
            chars.next();
        }
        let tok = &s[start..end];
        let column = offset + s[..start].chars().count() + 1;
        let value: usize = tok.parse().map_err(|_| {
            syntax(
                line,
                column,
                format!("expected a positive integer, found `{tok}`"),
            )
        })?;
        out.push(value);
    }
    Ok(out)
}

/// One of the four side slots of a square, listed in cyclic order around the square.
///
/// The corners of a square are, cyclically, `v`, a negative vertex, `w`, a negative vertex;
/// side `after_v` runs from `v` to the first negative vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SideSlot {
    AfterV,
    BeforeW,
    AfterW,
    BeforeV,
}

impl SideSlot {
    pub const CYCLIC: [SideSlot; 4] = [
        SideSlot::AfterV,
        SideSlot::BeforeW,
        SideSlot::AfterW,
        SideSlot::BeforeV,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_after(self) -> bool {
        matches!(self, SideSlot::AfterV | SideSlot::AfterW)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Square {
    pub label: usize,
    pub v: usize,
    pub w: usize,
    /// Global step id bound to each side, indexed by [`SideSlot::index`].
    pub sides: [usize; 4],
}

impl Square {
    pub fn side(&self, slot: SideSlot) -> usize {
        self.sides[slot.index()]
    }
}

/// Two side slots identified along an interior step (a decomposing arc).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Gluing {
    pub interior_index: usize,
    /// `(label, slot)` of the side after the step's lower place.
    pub after: (usize, SideSlot),
    /// `(label, slot)` of the side before the step's upper place.
    pub before: (usize, SideSlot),
}

/// The square complex of an arc diagram with its counting invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadSurface {
    pub squares: Vec<Square>,
    pub gluings: Vec<Gluing>,
    pub euler_char: i64,
    pub boundary_components: usize,
    pub genus: i64,
    pub marked_point_count: usize,
    pub index: usize,
}

impl QuadSurface {
    fn build(d: &ArcDiagram) -> Self {
        let k = d.k();
        let squares: Vec<Square> = (1..=k)
            .map(|label| {
                let (v, w) = d.twins(label);
                Square {
                    label,
                    v,
                    w,
                    sides: [
                        d.step_after(v),
                        d.step_before(w),
                        d.step_after(w),
                        d.step_before(v),
                    ],
                }
            })
            .collect();
        let slot_of = |place: usize, after: bool| -> (usize, SideSlot) {
            let label = d.label(place);
            let is_v = squares[label - 1].v == place;
            let slot = match (is_v, after) {
                (true, true) => SideSlot::AfterV,
                (true, false) => SideSlot::BeforeV,
                (false, true) => SideSlot::AfterW,
                (false, false) => SideSlot::BeforeW,
            };
            (label, slot)
        };
        let gluings: Vec<Gluing> = (0..d.interior_count())
            .map(|i| {
                let p = d.interior_lower_place(i);
                Gluing {
                    interior_index: i,
                    after: slot_of(p, true),
                    before: slot_of(p + 1, false),
                }
            })
            .collect();

        // half-edge model: side (q, i) runs from corner (q, i-1) to corner (q, i)
        let side_id = |(label, slot): (usize, SideSlot)| (label - 1) * 4 + slot.index();
        let mut partner = vec![None; 4 * k];
        for g in &gluings {
            let a = side_id(g.after);
            let b = side_id(g.before);
            partner[a] = Some(b);
            partner[b] = Some(a);
        }
        let prev = |s: usize| s - s % 4 + (s % 4 + 3) % 4;
        let next = |s: usize| s - s % 4 + (s % 4 + 1) % 4;

        // vertices: corners identified by the orientation-reversing gluings
        let mut uf = UnionFind::new(4 * k);
        for (a, b) in partner
            .iter()
            .enumerate()
            .filter_map(|(a, b)| b.map(|b| (a, b)))
        {
            // corner ids coincide with side ids: corner (q, i) ends side (q, i)
            uf.union(prev(a), b);
            uf.union(a, prev(b));
        }
        let vertex_count = (0..4 * k).filter(|&c| uf.find(c) == c).count();

        // boundary walk on unglued sides
        let boundary_next = |s: usize| -> usize {
            let mut cur = next(s);
            while let Some(p) = partner[cur] {
                cur = next(p);
            }
            cur
        };
        let mut seen = vec![false; 4 * k];
        let mut boundary_components = 0;
        for s in 0..4 * k {
            if partner[s].is_some() || seen[s] {
                continue;
            }
            boundary_components += 1;
            let mut cur = s;
            while !seen[cur] {
                seen[cur] = true;
                cur = boundary_next(cur);
            }
        }

        let edges = 4 * k - gluings.len();
        let euler_char = vertex_count as i64 - edges as i64 + k as i64;
        let genus = (2 - euler_char - boundary_components as i64) / 2;
        QuadSurface {
            squares,
            gluings,
            euler_char,
            boundary_components,
            genus,
            marked_point_count: vertex_count,
            index: k,
        }
    }

    pub fn square(&self, label: usize) -> &Square {
        &self.squares[label - 1]
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let up = self.parent[cur];
            self.parent[cur] = root;
            cur = up;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(sizes: &[usize], matching: &[usize]) -> ArcDiagram {
        ArcDiagram::new(sizes.to_vec(), matching.to_vec()).unwrap()
    }

    #[test]
    fn parse_smallest() {
        let d = ArcDiagram::parse("segments: 1 1\nmatching: 1 1\n").unwrap();
        assert_eq!(d.segment_sizes(), &[1, 1]);
        assert_eq!(d.matching(), &[1, 1]);
    }

    #[test]
    fn parse_with_comments_and_blank_lines() {
        let text = "# punctured torus\n\n  segments:4   # one segment\nmatching: 1 2 1 2\n# done\n";
        let d = ArcDiagram::parse(text).unwrap();
        assert_eq!(d, diag(&[4], &[1, 2, 1, 2]));
    }

    #[test]
    fn parse_rejects_triple_label() {
        let err = ArcDiagram::parse("segments: 2\nmatching: 1 1 1\n").unwrap_err();
        // three places listed against two: the length check fires first
        assert!(matches!(
            err,
            ParseError::Structure(StructureError::LengthMismatch { .. })
        ));
        let err = ArcDiagram::parse("segments: 3\nmatching: 1 1 1\n").unwrap_err();
        assert!(matches!(
            err,
            ParseError::Structure(StructureError::OddPlaces(3))
        ));
        let err = ArcDiagram::parse("segments: 4\nmatching: 1 1 1 2\n").unwrap_err();
        assert!(matches!(
            err,
            ParseError::Structure(StructureError::LabelCount { label: 1, count: 3 })
        ));
    }

    #[test]
    fn huge_segment_sizes_do_not_overflow() {
        let text = format!("segments: {} 1\nmatching: 1 1\n", usize::MAX);
        let err = ArcDiagram::parse(&text).unwrap_err();
        assert!(matches!(
            err,
            ParseError::Structure(StructureError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn parse_reports_line_and_column() {
        let err = ArcDiagram::parse("segments: 2\nmatching: 1 x\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                line: 2,
                column: 13,
                message: "expected a positive integer, found `x`".into()
            }
        );
        let err = ArcDiagram::parse("matching: 1 1\nsegments: 2\n").unwrap_err();
        assert!(matches!(
            err,
            ParseError::Syntax {
                line: 1,
                column: 1,
                ..
            }
        ));
        assert!(matches!(
            ArcDiagram::parse(""),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            ArcDiagram::parse("segments 2"),
            Err(ParseError::Syntax { .. })
        ));
    }

    #[test]
    fn parse_rejects_empty_segment() {
        let err = ArcDiagram::parse("segments: 2 0\nmatching: 1 1\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::Structure(StructureError::EmptySegment { segment: 2 })
        );
    }

    #[test]
    fn display_round_trips() {
        let d = diag(&[3, 1], &[1, 2, 1, 2]);
        assert_eq!(ArcDiagram::parse(&d.to_string()).unwrap(), d);
    }

    #[test]
    fn validate_examples() {
        assert_eq!(
            diag(&[2], &[1, 1]).validate(),
            SurgeryVerdict::Invalid { circle: vec![1, 2] }
        );
        assert!(diag(&[4], &[1, 2, 1, 2]).validate().is_ok());
        assert!(diag(&[3, 1], &[1, 2, 1, 2]).validate().is_ok());
        assert!(diag(&[1, 1], &[1, 1]).validate().is_ok());
        // nested pairs close up
        assert!(!diag(&[4], &[1, 2, 2, 1]).validate().is_ok());
    }

    #[test]
    fn step_counts() {
        let count = |d: &ArcDiagram| {
            let steps = d.steps();
            let interior = steps
                .iter()
                .filter(|s| s.kind == StepKind::Interior)
                .count();
            (interior, steps.len() - interior)
        };
        assert_eq!(count(&diag(&[1, 1], &[1, 1])), (0, 4));
        assert_eq!(count(&diag(&[4], &[1, 2, 1, 2])), (3, 2));
        assert_eq!(count(&diag(&[3, 1], &[1, 2, 1, 2])), (2, 4));
    }

    #[test]
    fn step_ids_match_place_adjacency() {
        let d = diag(&[3, 1], &[1, 2, 1, 2]);
        let steps = d.steps();
        for p in d.places() {
            assert_eq!(steps[d.step_after(p)].lower, Some(p));
            assert_eq!(steps[d.step_before(p)].upper, Some(p));
            assert_eq!(steps[d.step_after(p)].interior_index, d.interior_after(p));
        }
    }

    #[test]
    fn quad_surface_single_square() {
        let q = diag(&[1, 1], &[1, 1]).to_quad_surface().unwrap();
        assert_eq!(q.squares.len(), 1);
        assert!(q.gluings.is_empty());
        assert_eq!(q.euler_char, 1);
        assert_eq!(q.boundary_components, 1);
        assert_eq!(q.genus, 0);
        assert_eq!(q.marked_point_count, 4);
    }

    #[test]
    fn quad_surface_punctured_torus() {
        let q = diag(&[4], &[1, 2, 1, 2]).to_quad_surface().unwrap();
        assert_eq!(q.squares.len(), 2);
        assert_eq!(q.gluings.len(), 3);
        assert_eq!(q.euler_char, -1);
        assert_eq!(q.boundary_components, 1);
        assert_eq!(q.genus, 1);
        assert_eq!(q.marked_point_count, 2);
        // square 1 is bound to the steps around places 1 and 3
        let d = diag(&[4], &[1, 2, 1, 2]);
        let s = q.square(1);
        assert_eq!((s.v, s.w), (1, 3));
        assert_eq!(
            s.sides,
            [
                d.step_after(1),
                d.step_before(3),
                d.step_after(3),
                d.step_before(1)
            ]
        );
    }

    #[test]
    fn quad_surface_annulus() {
        // two squares, two gluings, two boundary circles by the walk below
        let q = diag(&[3, 1], &[1, 2, 1, 2]).to_quad_surface().unwrap();
        assert_eq!(q.gluings.len(), 2);
        assert_eq!(q.euler_char, 0);
        assert_eq!(q.boundary_components, 2);
        assert_eq!(q.genus, 0);
    }

    #[test]
    fn rejects_invalid_surface() {
        assert!(diag(&[2], &[1, 1]).to_quad_surface().is_err());
    }
}
