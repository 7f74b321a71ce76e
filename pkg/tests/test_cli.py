"""命令行：退出码、文本与 JSON 输出"""

import io
import json

import jsonschema
import pytest

from lucas_identities.cli import EXIT_INTERNAL, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, build_parser, run
from lucas_identities.commands import BUILTIN_COMMANDS
from lucas_identities.commands.base import get_registered_commands
from lucas_identities.core.schemas import (
    CATALOG_VERDICTS_SCHEMA, DISCOVER_OUTPUT_SCHEMA, IDENTITY_OUTPUT_SCHEMA, REPORT_SCHEMA, TEMPLATE_SCHEMA,
    VERDICT_SCHEMA,
)


def _run(*argv):
    stdout, stderr = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=stdout, stderr=stderr)
    return code, stdout.getvalue(), stderr.getvalue()


def _run_json(*argv):
    code, out, err = _run("--json", *argv)
    return code, (json.loads(out) if out else None), err


def test_commands_are_registered():
    assert list(BUILTIN_COMMANDS) == ["verify", "discover", "powrep", "interp", "eval", "catalog", "bench"]
    assert set(get_registered_commands()) == set(BUILTIN_COMMANDS)
    assert build_parser().prog == "lucas-identities"


# ===== verify =====

def test_verify_catalog_entry():
    code, out, _ = _run("verify", "--name", "GF.8")
    assert code == EXIT_OK
    assert "Verified" in out


def test_verify_expression_json():
    code, data, _ = _run_json("verify", "--expr", "U[2k] = U[k]^2")
    assert code == EXIT_NEGATIVE
    assert data["verdict"]["status"] == "Refuted"
    assert "witness" in data["verdict"]
    assert data["text"] == "U[2k] = U[k]^2"


def test_verify_with_parameters_and_bindings():
    code, data, _ = _run_json("verify", "--name", "GF.2", "--params", "1,-1", "--bind", "n=3")
    assert code == EXIT_OK
    assert data["identity"]["params"] == {"P": "1", "Q": "-1"}
    assert data["identity"]["index_vars"] == ["k"]


def test_verify_file(tmp_path):
    path = tmp_path / "double.lid"
    path.write_text("@name DOUBLE\nU[2k] = U[k]*V[k]\n", encoding="utf-8")
    code, data, _ = _run_json("verify", "--file", str(path))
    assert code == EXIT_OK
    assert data["verdict"]["name"] == "DOUBLE"


def test_verify_all():
    code, data, _ = _run_json("--workers", "2", "--trials", "20", "verify", "--all")
    assert code == EXIT_OK
    assert data["verified"] == data["total"]
    assert [v["name"] for v in data["verdicts"]][:3] == ["GF.1", "GF.2", "GF.3"]


@pytest.mark.parametrize("argv", [
    ["verify", "--expr", "c1*U[k]^2 = 0"],
    ["verify", "--expr", "U[k] = = U[k]"],
    ["verify", "--name", "GF.99"],
    ["verify", "--name", "GF.8", "--expr", "U[k] = U[k]"],
    ["verify"],
    ["verify", "--name", "GF.2", "--bind", "n=x"],
    ["verify", "--file", "missing.lid"],
    ["no-such-command"],
    [],
])
def test_usage_errors(argv):
    code, out, err = _run(*argv)
    assert code == EXIT_USAGE
    assert out == ""
    assert err


def test_json_output_is_byte_identical():
    first = _run("--json", "verify", "--expr", "U[3k] = U[k]^3")
    second = _run("--json", "verify", "--expr", "U[3k] = U[k]^3")
    assert first == second
    assert first[1].endswith("\n")


def test_settings_file(tmp_path):
    path = tmp_path / "settings.yaml"
    path.write_text("seed: 11\ntrials: 30\n", encoding="utf-8")
    code, _, _ = _run("--config", str(path), "verify", "--name", "GF.3")
    assert code == EXIT_OK
    bad = tmp_path / "bad.yaml"
    bad.write_text("trials: -1\n", encoding="utf-8")
    assert _run("--config", str(bad), "verify", "--name", "GF.3")[0] == EXIT_USAGE


# ===== discover / powrep / interp =====

def test_discover_four_squares():
    expr = "c1*U[k+1]^2 + c2*U[k]^2 + c3*U[k-1]^2 + c4*U[k-2]^2 = 0"
    code, data, _ = _run_json("discover", "--expr", expr, "--normalize", "c1=1")
    assert code == EXIT_OK
    assert data["report"]["rank"] == 3
    candidate = data["candidates"][0]
    assert candidate["verdict"]["status"] == "Verified"
    assert candidate["solution"]["c1"] == "1"


def test_discover_refuted_candidate():
    expr = "c1*(U[k-1]*U[k+2])^2 + c2*(U[k]*U[k+1])^2 + c3*U[2k+1]^2 = 0"
    code, data, _ = _run_json("discover", "--expr", expr)
    assert code == EXIT_NEGATIVE
    assert [c["verdict"]["status"] for c in data["candidates"]] == ["Refuted"]
    assert data["system"]["samples"] == [{"k": -1}, {"k": 0}, {"k": 1}]


def test_discover_explicit_samples():
    expr = "c1*(U[k-1]*U[k+2])^2 + c2*(U[k]*U[k+1])^2 + c3*U[2k+1]^2 = 0"
    code, data, _ = _run_json("discover", "--expr", expr, "--samples", "0,1,2")
    assert data["report"]["rank"] == 3
    assert data["report"]["parameter_conditions"]
    assert data["candidates"] == []
    assert code == EXIT_NEGATIVE


def test_discover_without_unknowns():
    assert _run("discover", "--expr", "U[2k] = U[k]*V[k]")[0] == EXIT_USAGE


def test_powrep():
    code, out, _ = _run("powrep", "--m", "2")
    assert code == EXIT_OK
    assert "U[2k]" in out
    code, data, _ = _run_json("powrep", "--m", "3", "--kind", "v", "--cross-check")
    assert code == EXIT_OK
    assert data["verdict"]["name"] == "POWREP.V3"
    assert _run("powrep", "--m", "0")[0] == EXIT_USAGE


def test_interp():
    code, data, _ = _run_json("interp", "--n", "3", "--nodes=-2,-1,0,1", "--x", "2", "--params", "1,-1")
    assert code == EXIT_OK
    assert data["verdict"]["status"] == "Verified"
    assert data["identity"]["params"] == {"P": "1", "Q": "-1"}
    code, data, _ = _run_json("interp", "--n", "2", "--nodes", "0,1,2", "--x", "y")
    assert code == EXIT_OK
    assert data["identity"]["index_vars"] == ["k", "y"]
    assert _run("interp", "--n", "2", "--nodes", "0,1,1")[0] == EXIT_USAGE


# ===== eval / bench / catalog =====

def test_eval():
    code, data, _ = _run_json("eval", "--k", "10")
    assert code == EXIT_OK
    assert data["value"] == "55"
    code, out, _ = _run("eval", "--kind", "v", "--k", "-3", "--P", "3/2", "--Q", "2", "--method", "matrix")
    assert code == EXIT_OK
    assert out.startswith("V[-3] = ")
    assert _run("eval", "--k", "5", "--P", "x")[0] == EXIT_USAGE
    assert _run("eval")[0] == EXIT_USAGE


def test_eval_singular_parameters():
    code, _, err = _run("eval", "--k", "-2", "--P", "1", "--Q", "0")
    assert code == EXIT_USAGE
    assert err


def test_bench_disagreement_is_internal_error(monkeypatch):
    from lucas_identities.commands import numeric
    from lucas_identities.core.lucas import LucasPair

    real = numeric.lucas_numeric

    calls = []

    def broken(params, k, method="doubling"):
        calls.append(method)
        pair = real(params, k, method)
        return LucasPair(pair.k, pair.u_k + 1, pair.u_k1) if method == "matrix" else pair

    monkeypatch.setattr(numeric, "lucas_numeric", broken)
    code, out, err = _run("bench", "--k", "30")
    assert code == EXIT_INTERNAL
    assert out == ""
    assert "matrix" in err
    # 结果不一致时不进入计时，每种算法只算一次
    assert calls == ["doubling", "iterative", "matrix"]


def test_bench():
    code, data, _ = _run_json("bench", "--k", "2000", "--methods", "doubling,iterative")
    assert code == EXIT_OK
    assert data["digits"] == 418
    assert [row["method"] for row in data["timings"]] == ["doubling", "iterative"]
    assert _run("bench", "--k", "10", "--methods", "closed")[0] == EXIT_USAGE


def test_catalog_list_and_show():
    code, data, _ = _run_json("catalog", "list")
    assert code == EXIT_OK
    assert data["entries"][0]["name"] == "GF.1"
    code, data, _ = _run_json("catalog", "show", "GF.14")
    assert data["metadata"]["instance"] == {"l": 2, "m": 1, "s": 3}
    assert data["lid"].startswith("@name GF.14")
    code, out, _ = _run("catalog", "show", "F.3")
    assert "U[2k+1] = U[k+1]^2 + U[k]^2" in out
    assert _run("catalog", "show")[0] == EXIT_USAGE
    assert _run("catalog", "show", "nope")[0] == EXIT_USAGE


# ===== JSON Schema =====

@pytest.mark.parametrize("argv, schema", [
    (["verify", "--name", "GF.8"], IDENTITY_OUTPUT_SCHEMA),
    (["verify", "--expr", "U[2k] = U[k]^2"], IDENTITY_OUTPUT_SCHEMA),
    (["verify", "--file", "{lid}"], IDENTITY_OUTPUT_SCHEMA),
    (["--trials", "20", "verify", "--all"], CATALOG_VERDICTS_SCHEMA),
    (["discover", "--expr", "c1*U[k+1]^2 + c2*U[k]^2 + c3*U[k-1]^2 + c4*U[k-2]^2 = 0"], DISCOVER_OUTPUT_SCHEMA),
    (["discover", "--expr", "c1*(U[k-1]*U[k+2])^2 + c2*(U[k]*U[k+1])^2 + c3*U[2k+1]^2 = 0"],
     DISCOVER_OUTPUT_SCHEMA),
    (["powrep", "--m", "3", "--kind", "v"], IDENTITY_OUTPUT_SCHEMA),
    (["interp", "--n", "2", "--nodes", "0,1,2", "--x", "3", "--variant", "w"], IDENTITY_OUTPUT_SCHEMA),
])
def test_json_output_matches_schema(tmp_path, argv, schema):
    path = tmp_path / "horadam.lid"
    path.write_text("@params a0=2, a1=1, p0=1, p1=1\nW[k+2] = W[k+1] + W[k]\n", encoding="utf-8")
    argv = [str(path) if a == "{lid}" else a for a in argv]
    code, data, _ = _run_json(*argv)
    assert code in (EXIT_OK, EXIT_NEGATIVE)
    jsonschema.validate(instance=data, schema=schema)


def test_json_parts_match_module_schemas():
    _, data, _ = _run_json("discover", "--expr", "c1*U[k+1]^2 + c2*U[k]^2 + c3*U[k-1]^2 = 0")
    jsonschema.validate(instance=data["report"], schema=REPORT_SCHEMA)
    assert data["report"]["nullity"] == 0
    _, data, _ = _run_json("verify", "--expr", "U[3k] = U[k]^3", "--params", "1,-1")
    jsonschema.validate(instance=data["identity"], schema=TEMPLATE_SCHEMA)
    jsonschema.validate(instance=data["verdict"], schema=VERDICT_SCHEMA)
    assert data["verdict"]["status"] == "Refuted"


def test_refuted_verdict_requires_witness():
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(instance={"name": "x", "status": "Refuted", "guards": []}, schema=VERDICT_SCHEMA)
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(instance={"name": "x", "status": "Verified", "guards": [],
                                      "witness": {"monomial": "T_k", "coefficient": "1"}}, schema=VERDICT_SCHEMA)


def test_output_violating_schema_is_internal_error(monkeypatch):
    from lucas_identities.commands import verify as verify_command

    def incomplete(verdict):
        return {"name": verdict.name, "status": verdict.status.value}

    monkeypatch.setattr(verify_command, "verdict_to_dict", incomplete)
    code, out, err = _run("--json", "verify", "--name", "GF.3")
    assert code == EXIT_INTERNAL
    assert out == ""
    assert "Schema" in err


def test_discover_normalization_on_zero_component():
    code, out, err = _run("discover", "--expr", "c1*U[2k] + c2*U[k]^2 + c3*U[k]*V[k] = 0", "--normalize", "c2=1")
    assert code == EXIT_USAGE
    assert out == ""
    assert "c2" in err
