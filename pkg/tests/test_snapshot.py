import numpy as np

from auxnet import (init_knowledge_base, load_knowledge_base, run_stream,
                    save_knowledge_base)
from conftest import synthetic_stream, tiny_config


def _assert_kb_equal(a, b):
    assert a.config == b.config
    for (ka, la), (kb_, lb) in zip(a.layer_items(), b.layer_items()):
        assert ka == kb_
        assert np.array_equal(la.W, lb.W)
        assert np.array_equal(la.c, lb.c)
        assert np.array_equal(la.theta, lb.theta)
        assert la.alpha == lb.alpha
        for sa, sb in ((la.adam_W, lb.adam_W), (la.adam_c, lb.adam_c),
                       (la.adam_theta, lb.adam_theta)):
            assert np.array_equal(sa.m, sb.m)
            assert np.array_equal(sa.v, sb.v)
            assert sa.step_count == sb.step_count


def test_round_trip_is_exact(tmp_path):
    cfg = tiny_config()
    kb = init_knowledge_base(cfg)
    run_stream(cfg, synthetic_stream(num_steps=50), kb=kb)  # non-trivial state
    path = tmp_path / "kb.json"
    save_knowledge_base(kb, path)
    _assert_kb_equal(kb, load_knowledge_base(path))


def test_checkpoint_resume_matches_uninterrupted_run(tmp_path):
    cfg = tiny_config()
    stream = synthetic_stream(num_steps=120)

    kb_full = init_knowledge_base(cfg)
    full = run_stream(cfg, stream, kb=kb_full)

    kb_a = init_knowledge_base(cfg)
    first = run_stream(cfg, stream[:60], kb=kb_a)
    path = tmp_path / "kb.json"
    save_knowledge_base(kb_a, path)
    kb_b = load_knowledge_base(path)
    second = run_stream(cfg, stream[60:], kb=kb_b)

    assert np.array_equal(full.predicted, np.concatenate([first.predicted, second.predicted]))
    assert np.array_equal(full.step_loss, np.concatenate([first.step_loss, second.step_loss]))
    _assert_kb_equal(kb_full, kb_b)
