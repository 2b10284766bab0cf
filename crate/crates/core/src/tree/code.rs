use super::TreeError;

/// Preorder code as ASCII decimal child counts separated by single spaces.
pub fn format_code(code: &[usize]) -> String {
    let parts: Vec<String> = code.iter().map(|c| c.to_string()).collect();
    parts.join(" ")
}

/// Parses the text form written by [`format_code`]; surrounding whitespace
/// and a trailing newline are accepted.
pub fn parse_code(text: &str) -> Result<Vec<usize>, TreeError> {
    let text = text.trim_end_matches(['\n', '\r']);
    if text.is_empty() {
        return Err(TreeError::MalformedCode("empty code".into()));
    }
    text.split(' ')
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| TreeError::MalformedCode(format!("bad token {tok:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form() {
        assert_eq!(format_code(&[3, 0, 3, 0, 0, 0, 0]), "3 0 3 0 0 0 0");
        assert_eq!(parse_code("2 0 0\n").unwrap(), vec![2, 0, 0]);
        assert!(parse_code("2  0 0").is_err());
        assert!(parse_code("").is_err());
        assert!(parse_code("2,0,0").is_err());
    }
}
