"""Drive the HTTP API end to end, in process.

The same app serves the browser client; here it is exercised through the
ASGI test client so the demo runs without opening a port. To serve it for
real: `python -m procscope.service --port 8080`.
"""
import json

from fastapi.testclient import TestClient

from procscope import export_json, parse_ruleset, ruleset_to_json
from procscope.service import create_app
from procscope.synthetic import generate_logistics_log

client = TestClient(create_app())

log = generate_logistics_log(seed=21, orders=60).log
response = client.post("/api/v1/logs", content=export_json(log))
body = response.json()
log_id = body["log_id"]
print("uploaded:", body["stats"])
print("object types offered to the rule builder:", sorted(body["object_types"]))

def ruleset(text: str) -> dict:
    return json.loads(ruleset_to_json(parse_ruleset(text)))

scopes = [
    {"name": "Order Management",
     "ruleset": ruleset("INCLUDE {(place_order), (confirm_order), (issue_transport_document)}")},
    {"name": "Fulfillment",
     "ruleset": ruleset("(INCLUDE {(collect_goods)} OR INCLUDE {(pack_container)})")},
]
print("\nPUT scopes:", client.put(f"/api/v1/logs/{log_id}/scopes", json=scopes).json())

summaries = client.post(f"/api/v1/logs/{log_id}/enrich").json()
print("enrichment summaries:", summaries)

graph = client.get(f"/api/v1/logs/{log_id}/graph?edge_label=avg_flow_time").json()
print("\ngraph nodes:", [n["id"] for n in graph["nodes"]])
print("graph edges:", [(e["source"], e["target"], e["transition_count"]) for e in graph["edges"]])

dot = client.get(f"/api/v1/logs/{log_id}/graph.dot")
print("\nDOT preview:")
print("\n".join(dot.text.splitlines()[:6]))

pocel = client.get(f"/api/v1/logs/{log_id}/pocel")
print(f"\nenriched log download: {len(pocel.content)} bytes")
