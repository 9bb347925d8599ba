//! Conventional names of low-dimensional classes, for display only. A class
//! is identified by its complex, multidegree and basis index; these names are
//! attached when the group at that multidegree is one-dimensional.

use crate::cobar::ComplexTag;
use crate::prime::Prime;

/// Conventional name of the generator at `(s, t)` of `tag`, if it has one.
pub fn standard_name(p: Prime, tag: ComplexTag, s: u32, t: u32) -> Option<String> {
    let q = p.q();
    let pw = |i: u32| p.pow(i) as u32;
    let h = |i: u32| (s, t) == (1, pw(i) * q);
    let b = |i: u32| (s, t) == (2, pw(i + 1) * q);
    match tag {
        ComplexTag::Adams => {
            if t == s {
                return Some(match s {
                    0 => "1".into(),
                    1 => "a_0".into(),
                    _ => format!("a_0^{s}"),
                });
            }
            (0..3).find(|&i| h(i)).map(|i| format!("h_{i}")).or_else(|| (0..2).find(|&i| b(i)).map(|i| format!("b_{i}")))
        }
        ComplexTag::AlgNov(k) => {
            let v0 = match k {
                0 => String::new(),
                1 => "v_0 ".into(),
                _ => format!("v_0^{k} "),
            };
            let base = if (s, t) == (0, 0) {
                Some(if k == 0 { "1".to_string() } else { String::new() })
            } else {
                (0..3).find(|&i| h(i)).map(|i| format!("h_{i}")).or_else(|| (0..2).find(|&i| b(i)).map(|i| format!("b_{i}")))
            }?;
            Some(format!("{v0}{base}").trim().to_string())
        }
        ComplexTag::Integral => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_names_at_three() {
        let p = Prime::new(3).unwrap();
        assert_eq!(standard_name(p, ComplexTag::Adams, 1, 1).as_deref(), Some("a_0"));
        assert_eq!(standard_name(p, ComplexTag::Adams, 1, 4).as_deref(), Some("h_0"));
        assert_eq!(standard_name(p, ComplexTag::Adams, 1, 12).as_deref(), Some("h_1"));
        assert_eq!(standard_name(p, ComplexTag::Adams, 2, 12).as_deref(), Some("b_0"));
        assert_eq!(standard_name(p, ComplexTag::AlgNov(1), 2, 12).as_deref(), Some("v_0 b_0"));
        assert_eq!(standard_name(p, ComplexTag::AlgNov(1), 0, 0).as_deref(), Some("v_0"));
        assert_eq!(standard_name(p, ComplexTag::Adams, 2, 5), None);
    }

    #[test]
    fn low_names_at_five() {
        let p = Prime::new(5).unwrap();
        assert_eq!(standard_name(p, ComplexTag::Adams, 1, 8).as_deref(), Some("h_0"));
        assert_eq!(standard_name(p, ComplexTag::Adams, 1, 40).as_deref(), Some("h_1"));
        assert_eq!(standard_name(p, ComplexTag::Adams, 2, 40).as_deref(), Some("b_0"));
    }
}
