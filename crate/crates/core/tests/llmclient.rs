use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use lcmeval_core::llmclient::*;

/// Scripted transport: answers from a queue of statuses (or failures) and
/// tracks calls and peak concurrency.
#[derive(Default)]
struct Fake {
    script: Mutex<Vec<Result<u16, TransportError>>>,
    calls: AtomicUsize,
    in_flight: AtomicUsize,
    peak: AtomicUsize,
    hold: Duration,
    /// Prompts containing this text get a 400.
    reject: Option<&'static str>,
}

impl Fake {
    fn scripted(mut script: Vec<Result<u16, TransportError>>) -> Self {
        script.reverse();
        Self { script: Mutex::new(script), ..Self::default() }
    }
}

impl Transport for Fake {
    fn send(&self, request: &HttpRequest) -> Result<HttpResponse, TransportError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        let now = self.in_flight.fetch_add(1, Ordering::SeqCst) + 1;
        self.peak.fetch_max(now, Ordering::SeqCst);
        std::thread::sleep(self.hold);
        self.in_flight.fetch_sub(1, Ordering::SeqCst);

        if self.reject.is_some_and(|r| request.body.contains(r)) {
            return Ok(HttpResponse { status: 400, body: "bad request".into() });
        }
        let status = self.script.lock().unwrap().pop().unwrap_or(Ok(200))?;
        let prompt: serde_json::Value = serde_json::from_str(&request.body).unwrap();
        let echo = prompt["messages"][0]["content"].as_str().unwrap();
        let body =
            serde_json::json!({ "model": "fake-1", "choices": [{ "message": { "content": format!("re: {echo}") } }] });
        Ok(HttpResponse { status, body: body.to_string() })
    }
}

fn model() -> ModelRecord {
    let mut m = ModelRecord::new("fake", "Fake", 80.0);
    m.endpoint = "https://example.invalid/v1/chat/completions".into();
    m.auth_env_var = "FAKE_KEY".into();
    m
}

fn client(fake: Arc<Fake>, cache: Option<CompletionCache>) -> Client {
    Client::new(fake, cache).with_sleeper(|_| {}).with_env(|k| (k == "FAKE_KEY").then(|| "secret".to_owned()))
}

#[test]
fn cache_hit_makes_no_call() {
    let dir = tempfile::tempdir().unwrap();
    let cache = CompletionCache::new(dir.path());
    let fake = Arc::new(Fake::default());
    let c = client(fake.clone(), Some(cache.clone()));
    let first = c.complete_detailed(&model(), "hej").unwrap();
    assert!(!first.from_cache);
    assert_eq!(fake.calls.load(Ordering::SeqCst), 1);
    let second = c.complete_detailed(&model(), "hej").unwrap();
    assert!(second.from_cache);
    assert_eq!(second.reply, "re: hej");
    assert_eq!(fake.calls.load(Ordering::SeqCst), 1);

    // a different prompt or different parameters is a different key
    let mut warm = model();
    warm.request_params.temperature = Some(0.7);
    assert_ne!(cache_key(&warm, "hej"), cache_key(&model(), "hej"));
    assert_ne!(cache_key(&model(), "hej!"), cache_key(&model(), "hej"));

    let offline = Client::offline(cache);
    assert_eq!(offline.complete(&model(), "hej").unwrap(), "re: hej");
    assert!(matches!(offline.complete(&model(), "nytt"), Err(ClientError::OfflineMiss(_))));
}

#[test]
fn missing_key_fails_before_any_request() {
    let fake = Arc::new(Fake::default());
    let c = Client::new(fake.clone(), None).with_env(|_| None);
    assert!(matches!(c.complete(&model(), "hej"), Err(ClientError::AuthMissing(v)) if v == "FAKE_KEY"));
    assert_eq!(fake.calls.load(Ordering::SeqCst), 0);
}

#[test]
fn transient_failures_are_retried_with_backoff() {
    let fake = Arc::new(Fake::scripted(vec![Ok(429), Err(TransportError::Timeout)]));
    let delays = Arc::new(Mutex::new(Vec::new()));
    let seen = delays.clone();
    let c = client(fake.clone(), None).with_sleeper(move |d| seen.lock().unwrap().push(d));
    let done = c.complete_detailed(&model(), "hej").unwrap();
    assert_eq!(done.attempts, 3);
    assert_eq!(fake.calls.load(Ordering::SeqCst), 3);
    assert_eq!(*delays.lock().unwrap(), [Duration::from_millis(500), Duration::from_millis(1000)]);
}

#[test]
fn retries_stop_at_the_limit() {
    let fake = Arc::new(Fake::scripted(vec![Ok(503); 10]));
    let c = client(fake.clone(), None).with_retry(RetryPolicy { max_attempts: 3, ..RetryPolicy::default() });
    assert!(matches!(c.complete(&model(), "hej"), Err(ClientError::ProviderError { status: 503, .. })));
    assert_eq!(fake.calls.load(Ordering::SeqCst), 3);

    let fake = Arc::new(Fake::scripted(vec![Ok(401)]));
    let c = client(fake.clone(), None);
    assert!(matches!(c.complete(&model(), "hej"), Err(ClientError::ProviderError { status: 401, .. })));
    assert_eq!(fake.calls.load(Ordering::SeqCst), 1);
}

#[test]
fn backoff_is_capped() {
    let p = RetryPolicy::default();
    assert_eq!(p.delay(0), Duration::from_millis(500));
    assert_eq!(p.delay(3), Duration::from_secs(4));
    assert_eq!(p.delay(12), Duration::from_secs(30));
}

#[test]
fn batch_respects_concurrency_and_order() {
    let fake = Arc::new(Fake { hold: Duration::from_millis(30), ..Fake::default() });
    let c = client(fake.clone(), None);
    let prompts: Vec<String> = (0..5).map(|i| format!("p{i}")).collect();
    let out = c.complete_batch(&model(), &prompts);
    assert!(fake.peak.load(Ordering::SeqCst) <= 2);
    let replies: Vec<String> = out.into_iter().map(Result::unwrap).collect();
    assert_eq!(replies, prompts.iter().map(|p| format!("re: {p}")).collect::<Vec<_>>());
}

#[test]
fn batch_keeps_going_past_a_failure() {
    let fake = Arc::new(Fake { reject: Some("p1"), ..Fake::default() });
    let c = client(fake, None);
    let out = c.complete_batch(&model(), &["p0", "p1", "p2"]);
    assert!(out[0].is_ok() && out[2].is_ok());
    assert!(matches!(out[1], Err(ClientError::ProviderError { status: 400, .. })));
}

#[test]
fn registry_validation() {
    let ok = "[[model]]\nmodel_id = \"a\"\ndisplay_name = \"A\"\nmmlu_score = 85.0\n";
    assert_eq!(Registry::from_toml(ok).unwrap().models[0].max_concurrency, 2);
    let dup = format!("{ok}{ok}");
    assert!(matches!(Registry::from_toml(&dup), Err(RegistryError::Duplicate(_))));
    let bad = ok.replace("85.0", "185.0");
    assert!(matches!(Registry::from_toml(&bad), Err(RegistryError::MmluRange { .. })));
    let fixture =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/registry.toml")).unwrap();
    let reg = Registry::from_toml(&fixture).unwrap();
    assert_eq!(reg.models.len(), 6);
    assert_eq!(Registry::from_toml(&reg.to_toml()).unwrap(), reg);
}
