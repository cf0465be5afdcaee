"""End-to-end checks against the external sandbox runner (if built).

The primary suite never requires the runner: everything here is skipped
when `sandbox-runner/dist/runner.js` is missing or node is unavailable.
"""

import shutil
from pathlib import Path

import pytest

from beambench.backends import AgentBackend, BackendRequest, BackendResponse, SandboxClient
from beambench.benchmark import benchmark_cases, render_problem_text
from beambench.grading import grade_response
from beambench.prompts import PromptConfig, assemble
from beambench.statics import solve_reactions

RUNNER_JS = Path(__file__).parent.parent / "sandbox-runner" / "dist" / "runner.js"
GOLDEN_DIR = Path(__file__).parent.parent / "sandbox-runner" / "golden"

pytestmark = pytest.mark.skipif(
    shutil.which("node") is None or not RUNNER_JS.is_file(),
    reason="sandbox runner not built; primary suite does not require it",
)


@pytest.fixture(scope="module")
def client():
    client = SandboxClient(["node", str(RUNNER_JS), "--max-concurrent", "2"])
    client.start()
    yield client
    client.close()


def test_health_probe(client):
    health = client.health()
    assert health["python"] and "Python" in health["python"]
    assert "opensees_available" in health


def test_golden_scripts_match_oracle(client):
    cases = {c.case_id: c for c in benchmark_cases()}
    scripts = sorted(GOLDEN_DIR.glob("*.py"))
    assert len(scripts) == 8
    for path in scripts:
        result = client.execute(path.read_text(), timeout_s=25.0)
        assert result.ok, (path.name, result.error)
        case = cases[result.payload["model"]["id"]]
        oracle = solve_reactions(case.model)
        by_position = {
            round(entry["position"], 6): entry["V"] for entry in result.payload["reactions"]
        }
        for entry in oracle.entries:
            support = case.model.supports[entry.support_index]
            assert abs(by_position[round(support.position_m, 6)] - entry.vertical_kN) <= 1e-6


def test_agent_pipeline_through_real_sandbox(client, ss_point_model):
    script = (GOLDEN_DIR / "ss_i.py").read_text()

    class CannedChat:
        def invoke(self, request):
            return BackendResponse(raw_text=f"Solving.\n```python\n{script}\n```\n")

    agent = AgentBackend(CannedChat(), executor=client, script_timeout_s=25.0)
    bundle = assemble(PromptConfig(), render_problem_text(ss_point_model))
    request = BackendRequest(case_id=ss_point_model.id, bundle=bundle, run_index=0, model=ss_point_model)
    response = agent.invoke(request)
    assert response.failure is None
    result = grade_response(response, ss_point_model, solve_reactions(ss_point_model))
    assert result.correct


def test_payload_missing_surfaces(client):
    result = client.execute("print('no block')", timeout_s=15.0)
    assert result.status == "payload_missing"


def test_short_timeout_kills(client):
    result = client.execute("while True:\n    pass\n", timeout_s=2.0)
    assert result.status == "timeout"
