import io
import json
import os
from fractions import Fraction

import pytest

from hilbcount import cache, cli, quadfield
from hilbcount.cli import UsageError, dispatch, parse_config
from hilbcount.quadfield import QuadraticCount


def run(argv):
    buf = io.StringIO()
    code = dispatch(argv, out=buf)
    return code, buf.getvalue()


def test_count_rational_golden_csv():
    code, out = run(["count", "rational", "--q", "2", "--n", "1", "--M", "1", "--M-max", "2"])
    assert code == 0
    assert out == (
        "q,n,M,observed,predicted,match\n"
        "2,1,1,6,6,true\n"
        "2,1,2,24,24,true\n"
    )


def test_count_rational_spot_42():
    code, out = run(["count", "rational", "--q", "2", "--n", "2", "--M", "1"])
    assert code == 0
    assert out.splitlines()[1] == "2,2,1,42,42,true"


def test_count_pairs_golden_csv():
    code, out = run(["count", "pairs", "--q", "2", "--M", "1", "--M-max", "2"])
    assert code == 0
    assert out == (
        "q,M,observed,closed_form,match\n"
        "2,1,294,294,true\n"
        "2,2,3234,3234,true\n"
    )


def test_cycles_golden_rows():
    code, out = run(["cycles", "--q", "2", "--m-max", "3"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "m,sym,hilb,primes,chen7,chen8,chen8_valid,ratio_error"
    assert lines[2].startswith("2,35,49,7,35,")
    assert lines[3].startswith("3,155,281,22,155,")


def test_json_format():
    code, out = run(["count", "pairs", "--q", "3", "--M", "1", "--format", "json"])
    assert code == 0
    data = json.loads(out)
    assert isinstance(data, list) and len(data) == 1
    assert data[0]["observed"] == data[0]["closed_form"]
    assert data[0]["match"] == "true"


def test_peyre_json_keys():
    code, out = run(["peyre", "hilb2", "--q", "3", "--format", "json"])
    assert code == 0
    (row,) = json.loads(out)
    assert set(row) == {"value", "residual_bound", "exact_prefactor"}
    assert abs(float(row["value"]) - 12.2927838461584) < 1e-9


def test_verify_lemmas_all_pass():
    code, out = run(["verify", "lemmas", "--q", "3"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "lemma,params,M,ratio_or_dev,pass"
    assert len(lines) > 5
    assert all(line.endswith(",true") for line in lines[1:])


def test_usage_errors_exit_2():
    assert dispatch(["count", "rational", "--q", "2", "--n", "1"], out=io.StringIO()) == 2  # missing --M
    assert dispatch(["count", "rational", "--nope"], out=io.StringIO()) == 2
    assert dispatch(["count", "quadratic", "--q", "2", "--M", "1"], out=io.StringIO()) == 2  # even q
    assert dispatch(["count", "rational", "--q", "6", "--n", "1", "--M", "1"], out=io.StringIO()) == 2


def test_size_guard_exit_3():
    code, _ = run(["count", "rational", "--q", "97", "--n", "5", "--M", "9"])
    assert code == 3


def test_unstable_exit_4(monkeypatch):
    fake = QuadraticCount(q=3, M=1, count=1, stable=False,
                          main_term=Fraction(1), ratio=Fraction(1))
    monkeypatch.setattr(quadfield, "enumerate_degree2", lambda field, M, jobs=1: fake)
    code, _ = run(["count", "quadratic", "--q", "3", "--M", "1"])
    assert code == 4
    code, out = run(["count", "quadratic", "--q", "3", "--M", "1", "--allow-unstable"])
    assert code == 0
    assert out.splitlines()[1] == "3,1,1,false,1,1"


def test_parse_config(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment line\nq = 2\nM=1  # trailing comment\nformat = json\n")
    assert parse_config(str(cfg)) == {"q": 2, "M": 1, "format": "json"}
    bad = tmp_path / "bad.cfg"
    bad.write_text("zq = 2\n")
    with pytest.raises(UsageError):
        parse_config(str(bad))
    noeq = tmp_path / "noeq.cfg"
    noeq.write_text("just words\n")
    with pytest.raises(UsageError):
        parse_config(str(noeq))


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("q = 2\nM = 1\n")
    code, out = run(["count", "pairs", "--config", str(cfg)])
    assert code == 0
    assert out.splitlines()[1].startswith("2,1,294,")
    # an explicit flag wins over the config value
    code, out = run(["count", "pairs", "--config", str(cfg), "--q", "3"])
    assert code == 0
    assert out.splitlines()[1].startswith("3,1,")
    assert dispatch(["count", "pairs", "--config"], out=io.StringIO()) == 2
    assert dispatch(["count", "pairs", "--config", str(tmp_path / "nope")], out=io.StringIO()) == 2


def test_cache_warm_equals_cold(tmp_path):
    argv = ["count", "pairs", "--q", "2", "--M", "1", "--cache-dir", str(tmp_path)]
    code1, cold = run(argv)
    assert code1 == 0
    files = [f for f in os.listdir(tmp_path) if f.endswith(".json")]
    assert len(files) == 1
    code2, warm = run(argv)
    assert code2 == 0 and warm == cold
    # a different parameter must not hit the same entry
    run(["count", "pairs", "--q", "3", "--M", "1", "--cache-dir", str(tmp_path)])
    assert len([f for f in os.listdir(tmp_path) if f.endswith(".json")]) == 2


def test_cache_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path))
    code, _ = run(["count", "pairs", "--q", "2", "--M", "1"])
    assert code == 0
    assert any(f.endswith(".json") for f in os.listdir(tmp_path))


def test_cache_corrupt_quarantine(tmp_path):
    config = {"a": 1}
    path = cache.store(str(tmp_path), config, {"rows": []})
    assert cache.load(str(tmp_path), config) == {"rows": []}
    with open(path, "w") as fh:
        fh.write("{not json")
    assert cache.load(str(tmp_path), config) is None
    assert os.path.exists(path + ".corrupt")
    assert not os.path.exists(path)
    # fingerprint mismatch is also quarantined
    path = cache.store(str(tmp_path), config, {"rows": []})
    with open(path) as fh:
        entry = json.load(fh)
    entry["fingerprint"] = "0" * 64
    with open(path, "w") as fh:
        json.dump(entry, fh)
    assert cache.load(str(tmp_path), config) is None
    assert os.path.exists(path + ".corrupt")


def test_cache_schema_version_bump(tmp_path, monkeypatch):
    config = {"a": 2}
    cache.store(str(tmp_path), config, {"rows": [["x"]]})
    monkeypatch.setattr(cache, "SCHEMA_VERSION", cache.SCHEMA_VERSION + 1)
    assert cache.load(str(tmp_path), config) is None


def test_cache_roundtrip_helper(tmp_path):
    payload = {"columns": ["a"], "rows": [["1"], ["2"]]}
    assert cache.cache_roundtrip(str(tmp_path), {"k": "v"}, payload) == payload


def test_plot_outputs(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, _ = run(["count", "pairs", "--q", "2", "--M", "1", "--M-max", "3", "--plot"])
    assert code == 0
    data = (tmp_path / "count_pairs_plot.csv").read_text()
    lines = data.splitlines()
    assert lines[0] == "M,ratio"
    assert [line.split(",")[0] for line in lines[1:]] == ["1", "2", "3"]
    script = (tmp_path / "count_pairs_plot.py").read_text()
    assert "semilogx" in script
