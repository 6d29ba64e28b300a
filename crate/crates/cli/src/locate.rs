use kron_core::codec::PathSeg;

/// 1-based line and column of the value at `path` in JSON `text`, or of the
/// deepest enclosing value that exists.
pub fn locate(text: &str, path: &[PathSeg]) -> (usize, usize) {
    let bytes = text.as_bytes();
    let mut pos = skip_ws(bytes, 0);
    for seg in path {
        match step(bytes, pos, seg) {
            Some(next) => pos = next,
            None => break,
        }
    }
    line_col(text, pos)
}

fn line_col(text: &str, pos: usize) -> (usize, usize) {
    let before = &text[..pos.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn skip_ws(b: &[u8], mut i: usize) -> usize {
    while i < b.len() && b[i].is_ascii_whitespace() {
        i += 1;
    }
    i
}

/// Offset of the child `seg` of the value starting at `i`.
fn step(b: &[u8], i: usize, seg: &PathSeg) -> Option<usize> {
    match (b.get(i)?, seg) {
        (b'{', PathSeg::Key(key)) => {
            let mut j = skip_ws(b, i + 1);
            while b.get(j)? == &b'"' {
                let end = skip_string(b, j)?;
                let name: String = serde_json::from_slice(&b[j..end]).ok()?;
                j = skip_ws(b, end);
                if b.get(j)? != &b':' {
                    return None;
                }
                j = skip_ws(b, j + 1);
                if &name == key {
                    return Some(j);
                }
                j = skip_ws(b, skip_value(b, j)?);
                if b.get(j)? == &b',' {
                    j = skip_ws(b, j + 1);
                }
            }
            None
        }
        (b'[', PathSeg::Index(k)) => {
            let mut j = skip_ws(b, i + 1);
            for _ in 0..*k {
                j = skip_ws(b, skip_value(b, j)?);
                if b.get(j)? != &b',' {
                    return None;
                }
                j = skip_ws(b, j + 1);
            }
            (b.get(j)? != &b']').then_some(j)
        }
        _ => None,
    }
}

fn skip_string(b: &[u8], i: usize) -> Option<usize> {
    let mut j = i + 1;
    while j < b.len() {
        match b[j] {
            b'\\' => j += 2,
            b'"' => return Some(j + 1),
            _ => j += 1,
        }
    }
    None
}

fn skip_value(b: &[u8], i: usize) -> Option<usize> {
    match b.get(i)? {
        b'"' => skip_string(b, i),
        b'{' | b'[' => {
            let mut depth = 0usize;
            let mut j = i;
            while j < b.len() {
                match b[j] {
                    b'"' => {
                        j = skip_string(b, j)?;
                        continue;
                    }
                    b'{' | b'[' => depth += 1,
                    b'}' | b']' => {
                        depth -= 1;
                        if depth == 0 {
                            return Some(j + 1);
                        }
                    }
                    _ => {}
                }
                j += 1;
            }
            None
        }
        _ => {
            let mut j = i;
            while j < b.len() && !matches!(b[j], b',' | b'}' | b']') && !b[j].is_ascii_whitespace() {
                j += 1;
            }
            Some(j)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(k: &str) -> PathSeg {
        PathSeg::Key(k.into())
    }

    #[test]
    fn finds_nested_values() {
        let text = "{\n  \"kind\": \"x\",\n  \"A\": [[\"1/2\", \"1/0\"]],\n  \"s\": \"a\\\"]}\"\n}";
        assert_eq!(locate(text, &[key("A"), PathSeg::Index(0), PathSeg::Index(1)]), (3, 17));
        assert_eq!(locate(text, &[key("kind")]), (2, 11));
        assert_eq!(locate(text, &[key("s")]), (4, 8));
        // missing keys stop at the enclosing value
        assert_eq!(locate(text, &[key("B")]), (1, 1));
        assert_eq!(locate(text, &[key("A"), PathSeg::Index(3)]), (3, 8));
    }

    #[test]
    fn handles_arrays_at_the_root() {
        let text = "[{\"a\": 1}, {\"a\": [2, 3]}]";
        assert_eq!(locate(text, &[PathSeg::Index(1), key("a"), PathSeg::Index(1)]), (1, 22));
    }
}
