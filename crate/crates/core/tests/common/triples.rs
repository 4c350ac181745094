//! Three-way text fixtures whose branch edits are disjoint.

/// What happens to one base line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edit {
    Keep,
    Left,
    Right,
}

pub struct Triple {
    pub base: String,
    pub left: String,
    pub right: String,
    /// Both branches' edits combined.
    pub merged: String,
}

fn edited(i: usize, side: &str, out: &mut String) {
    match i % 3 {
        0 => out.push_str(&format!("{side} changed {i}\n")),
        1 => {}
        _ => out.push_str(&format!("{side} first {i}\n{side} second {i}\n")),
    }
}

/// Builds a triple from one tag per base line. A line edited by one branch
/// right after a line edited by the other is kept, so at least one stable
/// line always separates the two branches' edits.
pub fn triple(tags: &[Edit]) -> Triple {
    let mut tags = tags.to_vec();
    for i in 1..tags.len() {
        if tags[i] != Edit::Keep && tags[i - 1] != Edit::Keep && tags[i] != tags[i - 1] {
            tags[i] = Edit::Keep;
        }
    }
    let mut t = Triple {
        base: String::new(),
        left: String::new(),
        right: String::new(),
        merged: String::new(),
    };
    for (i, tag) in tags.iter().enumerate() {
        let line = format!("line {i}\n");
        t.base.push_str(&line);
        match tag {
            Edit::Keep => {
                t.left.push_str(&line);
                t.right.push_str(&line);
                t.merged.push_str(&line);
            }
            Edit::Left => {
                edited(i, "left", &mut t.left);
                edited(i, "left", &mut t.merged);
                t.right.push_str(&line);
            }
            Edit::Right => {
                edited(i, "right", &mut t.right);
                edited(i, "right", &mut t.merged);
                t.left.push_str(&line);
            }
        }
    }
    t
}
