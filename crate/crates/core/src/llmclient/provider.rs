use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{HttpRequest, ModelRecord};

/// Request and response shape of a provider.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProviderFamily {
    /// `/chat/completions`-style APIs (OpenAI and compatible hosts).
    #[default]
    #[serde(rename = "openai")]
    OpenAi,
    /// Google `generateContent`.
    Gemini,
}

impl ProviderFamily {
    pub(crate) fn build_request(self, model: &ModelRecord, prompt: &str, api_key: &str) -> HttpRequest {
        let params = &model.request_params;
        let (headers, body) = match self {
            ProviderFamily::OpenAi => {
                let mut body = json!({
                    "model": model.api_model(),
                    "messages": [{ "role": "user", "content": prompt }],
                });
                if let Some(t) = params.temperature {
                    body["temperature"] = json!(t);
                }
                if let Some(n) = params.max_tokens {
                    body["max_tokens"] = json!(n);
                }
                (vec![("Authorization".to_owned(), format!("Bearer {api_key}"))], body)
            }
            ProviderFamily::Gemini => {
                let mut config = serde_json::Map::new();
                if let Some(t) = params.temperature {
                    config.insert("temperature".into(), json!(t));
                }
                if let Some(n) = params.max_tokens {
                    config.insert("maxOutputTokens".into(), json!(n));
                }
                let mut body = json!({ "contents": [{ "role": "user", "parts": [{ "text": prompt }] }] });
                if !config.is_empty() {
                    body["generationConfig"] = Value::Object(config);
                }
                (vec![("x-goog-api-key".to_owned(), api_key.to_owned())], body)
            }
        };
        HttpRequest { url: model.endpoint.clone(), headers, body: body.to_string() }
    }

    /// Pulls the reply text and a short provider tag out of a response body.
    pub(crate) fn extract_reply(self, body: &str) -> Result<(String, String), String> {
        let v: Value = serde_json::from_str(body).map_err(|e| format!("response is not JSON: {e}"))?;
        let text = match self {
            ProviderFamily::OpenAi => {
                v.pointer("/choices/0/message/content").and_then(Value::as_str).map(str::to_owned)
            }
            ProviderFamily::Gemini => v
                .pointer("/candidates/0/content/parts")
                .and_then(Value::as_array)
                .map(|parts| parts.iter().filter_map(|p| p.get("text").and_then(Value::as_str)).collect::<String>()),
        }
        .ok_or_else(|| "response has no reply text".to_owned())?;
        let meta = ["model", "modelVersion", "id"]
            .iter()
            .find_map(|k| v.get(*k).and_then(Value::as_str))
            .unwrap_or_default()
            .to_owned();
        Ok((text, meta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn openai_round_trip() {
        let mut m = ModelRecord::new("gpt-4o-mini", "GPT-4o-mini", 88.7);
        m.request_params.temperature = Some(0.0);
        let req = ProviderFamily::OpenAi.build_request(&m, "hej", "KEY");
        let body: Value = serde_json::from_str(&req.body).unwrap();
        assert_eq!(body["messages"][0]["content"], "hej");
        assert_eq!(body["temperature"], 0.0);
        assert_eq!(req.headers[0].1, "Bearer KEY");

        let resp =
            r#"{"id":"x","model":"gpt-4o-mini-2024","choices":[{"message":{"role":"assistant","content":"LIX=40"}}]}"#;
        assert_eq!(ProviderFamily::OpenAi.extract_reply(resp).unwrap(), ("LIX=40".into(), "gpt-4o-mini-2024".into()));
    }

    #[test]
    fn gemini_round_trip() {
        let m = ModelRecord::new("gemini-2.0-flash", "Gemini-2.0-flash", 87.0);
        let req = ProviderFamily::Gemini.build_request(&m, "hej", "KEY");
        let body: Value = serde_json::from_str(&req.body).unwrap();
        assert_eq!(body["contents"][0]["parts"][0]["text"], "hej");
        assert!(body.get("generationConfig").is_none());

        let resp = r#"{"candidates":[{"content":{"parts":[{"text":"LIX="},{"text":"41"}]}}],"modelVersion":"g2"}"#;
        assert_eq!(ProviderFamily::Gemini.extract_reply(resp).unwrap(), ("LIX=41".into(), "g2".into()));
        assert!(ProviderFamily::Gemini.extract_reply("{}").is_err());
    }
}
