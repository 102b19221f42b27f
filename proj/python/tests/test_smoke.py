import json
import math

import numpy as np
import pytest

import gsacnet


def bedroom():
    room = gsacnet.Scene.rectangle("demo", 4.0, 3.0)
    room = room.with_object("bed", "Bed", [0, 0, 0], [2, 1.6, 0.5])
    return room.with_object("lamp", "Decor", [2.1, 0, 0], [2.4, 0.3, 0.4])


def test_groups():
    assert gsacnet.GROUPS == ["Bed", "Chair", "Decor", "Picture", "Sofa", "Storage", "Table", "TV"]


def test_scene_json_round_trip():
    room = bedroom()
    text = room.to_json()
    assert json.loads(text)["schema_version"] == 1
    back = gsacnet.Scene.from_json(text)
    assert back.to_json() == text
    assert [o["id"] for o in back.objects] == ["bed", "lamp"]
    assert back.floor_area == pytest.approx(12.0)


def test_schema_error_is_value_error():
    bad = json.loads(bedroom().to_json())
    bad["objects"][1]["max"][2] = -1
    with pytest.raises(ValueError, match=r"objects\[1\]\.max\.z"):
        gsacnet.Scene.from_json(json.dumps(bad))


def test_features_and_graphs():
    room = bedroom()
    x = gsacnet.summary_vector(room, "bed")
    assert len(x) == 48
    assert x[4] == 1.0  # corner flag
    edges = gsacnet.graph_edges(room, "bed")
    relations = {e[0] for e in edges}
    assert relations == {"IX", "SB", "SBY", "STO", "RP", "CO"}
    assert ("CO", "lamp", "bed") in edges
    assert all(target == "bed" for _, _, target in edges)


def test_augment_is_deterministic():
    rooms = gsacnet.synthetic_corpus(rooms=3, seed=1)
    a = gsacnet.augment(rooms, variants=2, removal=False, seed=5)
    b = gsacnet.augment(rooms, variants=2, removal=False, seed=5)
    assert [s.to_json() for s in a] == [s.to_json() for s in b]
    assert len(a) <= 6


def test_train_score_and_save(tmp_path):
    rooms = gsacnet.synthetic_corpus(rooms=6, seed=2)
    model = gsacnet.GroupModel.train(rooms, "Table", epochs=2, l2_siamese=0.0, seed=3)
    room = rooms[0].without_object(next(o["id"] for o in rooms[0].objects if o["group"] == "Table"))
    p = model.score(room, [1.2, 0.8, 0.75], [1.0, 1.0])
    assert 0.0 < p <= 1.0

    probs, origin, cell = model.heatmap(room, [1.2, 0.8, 0.75], cell_size=0.25)
    assert probs.ndim == 2
    assert cell == (0.25, 0.25)
    finite = probs[np.isfinite(probs)]
    assert finite.size > 0 and np.all(finite > 0) and np.all(finite <= 1)

    top = model.propose(room, [1.2, 0.8, 0.75], k=3, cell_size=0.25)
    assert 1 <= len(top) <= 3
    assert top[0][2] == pytest.approx(finite.max())

    model.save(tmp_path)
    back = gsacnet.GroupModel.load(tmp_path, "Table")
    assert back.score(room, [1.2, 0.8, 0.75], [1.0, 1.0]) == p
    with pytest.raises(ValueError):
        gsacnet.GroupModel.load(tmp_path, "Bed")


def test_unknown_group():
    with pytest.raises(ValueError, match="unknown furniture group"):
        bedroom().with_object("x", "Lamp", [0, 0, 0], [1, 1, 1])
    assert math.isfinite(bedroom().open_space_ratio(64))
