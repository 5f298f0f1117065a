//! `{name}` placeholder substitution for the static templates.

/// Replaces every `{key}` in `template` with its value. Templates are
/// compiled in, so an unknown key is a bug in this crate and panics.
pub fn instantiate(template: &str, vars: &[(&str, String)]) -> String {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let close = after.find('}').expect("unterminated placeholder in template");
        let key = &after[..close];
        let value = vars
            .iter()
            .find(|(k, _)| *k == key)
            .unwrap_or_else(|| panic!("template placeholder `{key}` has no value"));
        out.push_str(&value.1);
        rest = &after[close + 1..];
    }
    out.push_str(rest);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitutes_every_occurrence() {
        let s = instantiate("U{j} : U{j1}, U{j}", &[("j", "0".into()), ("j1", "1".into())]);
        assert_eq!(s, "U0 : U1, U0");
    }

    #[test]
    fn text_without_placeholders_is_unchanged() {
        assert_eq!(instantiate("fun x => x", &[]), "fun x => x");
    }

    #[test]
    #[should_panic(expected = "no value")]
    fn unknown_key_panics() {
        instantiate("{nope}", &[]);
    }
}
