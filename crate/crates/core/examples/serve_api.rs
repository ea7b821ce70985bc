//! Starts the HTTP service on an ephemeral port, issues one search and
//! shuts down.

use boundsearch::service::{start_service, ServiceConfig};
use std::io::{Read, Write};
use std::net::TcpStream;

#[tokio::main]
async fn main() {
    let mut config = ServiceConfig::new(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/awka.jsonl"));
    config.bind_address = "127.0.0.1:0".into();
    let handle = start_service(config).await.expect("service should start");
    let addr = handle.local_addr();
    println!("listening on http://{addr}");

    let body = tokio::task::spawn_blocking(move || {
        let mut stream = TcpStream::connect(addr).unwrap();
        write!(
            stream,
            "GET /api/search?q=ifi&facet.transaction_type=Rent&limit=2 HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n\r\n"
        )
        .unwrap();
        let mut response = String::new();
        stream.read_to_string(&mut response).unwrap();
        response
    })
    .await
    .unwrap();
    println!("{body}");

    handle.shutdown().await.unwrap();
}
