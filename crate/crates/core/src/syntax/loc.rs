//! Line-of-code counting.

use rustpython_parser::lexer::lex;
use rustpython_parser::{Mode, Tok};

use super::lower::LineIndex;
use super::node::LineRange;

/// Per-line flag telling whether a physical line carries at least one token
/// that is neither a comment nor layout.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CodeLines {
    code: Vec<bool>,
}

impl CodeLines {
    pub fn from_source(source: &str) -> Self {
        let index = LineIndex::new(source);
        let mut code = vec![false; index.line_count() as usize];
        for item in lex(source, Mode::Module) {
            let Ok((tok, range)) = item else { break };
            if matches!(tok, Tok::Newline | Tok::Indent | Tok::Dedent | Tok::EndOfFile) {
                continue;
            }
            let (first, _) = index.position(range.start().to_usize());
            let (last, _) = index.position(range.end().to_usize());
            for line in first..=last {
                if let Some(slot) = code.get_mut(line as usize - 1) {
                    *slot = true;
                }
            }
        }
        CodeLines { code }
    }

    pub fn is_code(&self, line: u32) -> bool {
        line >= 1 && self.code.get(line as usize - 1).copied().unwrap_or(false)
    }

    /// Code lines inside `range`.
    pub fn count(&self, range: LineRange) -> u32 {
        (range.first..=range.last).filter(|&l| self.is_code(l)).count() as u32
    }

    pub fn total(&self) -> u32 {
        self.code.iter().filter(|&&c| c).count() as u32
    }

    pub fn line_count(&self) -> u32 {
        self.code.len() as u32
    }
}

/// Number of lines in `span` holding at least one token that is not a comment
/// and not only whitespace.
pub fn loc_of(span: LineRange, source_text: &str) -> u32 {
    CodeLines::from_source(source_text).count(span)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_version_body_is_two_lines() {
        let src = "def parse_version(s):\n    return map(int, s.split('.'))\n";
        assert_eq!(loc_of(LineRange::new(1, 2), src), 2);
    }

    #[test]
    fn blank_and_comment_lines_do_not_count() {
        let src = "\n# just a comment\n   \n    # indented comment\n";
        assert_eq!(loc_of(LineRange::new(1, 4), src), 0);
    }

    #[test]
    fn ten_line_span_with_blanks_and_comments() {
        // 3 blank lines, 2 comment-only lines, 5 code lines
        let src = "\
def f(s):
    # split on commas
    parts = s.split(',')

    n = len(parts)
    # done

    x = parts[0]

    return x
";
        assert_eq!(loc_of(LineRange::new(1, 10), src), 5);
    }

    #[test]
    fn multiline_string_counts_every_line() {
        let src = "x = \"\"\"a\n\nb\"\"\"\n";
        assert_eq!(loc_of(LineRange::new(1, 3), src), 3);
    }

    #[test]
    fn trailing_comment_line_is_code() {
        assert_eq!(loc_of(LineRange::new(1, 1), "x = 1  # note\n"), 1);
    }

    proptest! {
        #[test]
        fn enlarging_a_span_never_decreases_count(first in 1u32..12, len in 0u32..12, grow in 0u32..6) {
            let src = "import os\n\n# c\nx = 1\ny = (x +\n     2)\n\n\ndef f():\n    pass\n# end\nz = 3\n";
            let lines = CodeLines::from_source(src);
            let small = LineRange::new(first, first + len);
            let big = LineRange::new(first.saturating_sub(grow).max(1), first + len + grow);
            prop_assert!(lines.count(big) >= lines.count(small));
        }
    }
}
