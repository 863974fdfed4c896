use qcong_core::CongruenceClaim;

/// Reads claims given as a single object, an array of objects, or JSON lines.
pub fn parse_claims(text: &str) -> Result<Vec<CongruenceClaim>, String> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        return serde_json::from_str(text).map_err(|e| format!("line {}: {e}", e.line()));
    }
    if let Ok(one) = serde_json::from_str::<CongruenceClaim>(text) {
        return Ok(vec![one]);
    }
    let mut claims = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let claim = serde_json::from_str(line).map_err(|e| format!("line {}: {e}", i + 1))?;
        claims.push(claim);
    }
    if claims.is_empty() {
        return Err("claim file contains no claims".into());
    }
    Ok(claims)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE: &str = r#"{"ell":2,"mu":3,"A":9,"B":6,"M":6}"#;

    #[test]
    fn accepts_all_layouts() {
        assert_eq!(parse_claims(ONE).unwrap().len(), 1);
        let pretty = "{\n  \"ell\": 2, \"mu\": 3,\n  \"A\": 9, \"B\": 6, \"M\": 6\n}\n";
        assert_eq!(parse_claims(pretty).unwrap().len(), 1);
        assert_eq!(parse_claims(&format!("[{ONE}, {ONE}]")).unwrap().len(), 2);
        assert_eq!(parse_claims(&format!("{ONE}\n\n{ONE}\n")).unwrap().len(), 2);
    }

    #[test]
    fn errors_name_the_line() {
        let err = parse_claims(&format!("{ONE}\n{ONE}\n{{\"ell\": 2}}\n")).unwrap_err();
        assert!(err.starts_with("line 3:"), "{err}");
        let err = parse_claims(&format!("[\n{ONE},\n{{\"ell\": \"x\"}}\n]")).unwrap_err();
        assert!(err.starts_with("line 3:"), "{err}");
        assert!(parse_claims("  \n").is_err());
    }
}
