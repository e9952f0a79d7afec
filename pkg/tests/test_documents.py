"""Document parsing, serialization round trips, and schema error messages."""
import json

import pytest

from gogkit.documents import (
    document_data,
    load_document,
    parse_document,
    save_document,
)
from gogkit.errors import DocumentError
from gogkit.fixtures import FIXTURE_NAMES, fixture_text, load_fixture
from gogkit.gog import ball, nf


def base_doc() -> dict:
    return json.loads(fixture_text("c4c6"))


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_round_trip_is_stable(name):
    g = load_fixture(name)
    data = document_data(g)
    again = parse_document(data).gog
    assert document_data(again) == data


def test_round_trip_preserves_word_problem():
    g = load_fixture("c4c6")
    again = parse_document(document_data(g)).gog
    assert [x.text() for x in ball(g, 2)] == [x.text() for x in ball(again, 2)]


def test_composite_round_trip_keeps_word_images():
    data = document_data(load_fixture("expand_demo"))
    (vertex,) = [v for v in data["graph"]["vertices"] if v["id"] == "m"]
    assert "gog" in vertex["group"]
    (edge,) = data["graph"]["edges"]
    assert edge["d1_images"] == ["1", "u:g1"]
    again = parse_document(data).gog
    assert nf(again, "m:{u:g1}").text() == "z:g1"


def test_parse_rejects_invalid_json():
    with pytest.raises(DocumentError, match="invalid JSON"):
        parse_document("{nope")


def test_parse_rejects_non_object():
    with pytest.raises(DocumentError, match="must be a JSON object"):
        parse_document("[1, 2]")


def test_missing_graph_section():
    with pytest.raises(DocumentError, match="missing the 'graph' section"):
        parse_document({"name": "x"})


def test_missing_edges_key():
    doc = base_doc()
    del doc["graph"]["edges"]
    with pytest.raises(DocumentError, match="missing 'edges'"):
        parse_document(doc)


def test_vertex_needs_id_and_group():
    doc = base_doc()
    del doc["graph"]["vertices"][0]["group"]
    with pytest.raises(DocumentError, match="needs 'id' and 'group'"):
        parse_document(doc)


def test_duplicate_vertex_id():
    doc = base_doc()
    doc["graph"]["vertices"].append({"id": "v", "group": "cyclic 2"})
    with pytest.raises(DocumentError, match="duplicate vertex id 'v'"):
        parse_document(doc)


def test_duplicate_edge_id():
    doc = base_doc()
    doc["graph"]["edges"].append(dict(doc["graph"]["edges"][0]))
    with pytest.raises(DocumentError, match="duplicate edge id 'e'"):
        parse_document(doc)


def test_edge_with_unknown_endpoint():
    doc = base_doc()
    doc["graph"]["edges"][0]["to"] = "zz"
    with pytest.raises(DocumentError, match="references an unknown vertex"):
        parse_document(doc)


def test_edge_missing_images():
    doc = base_doc()
    del doc["graph"]["edges"][0]["d1_images"]
    with pytest.raises(DocumentError, match="each edge needs 'd1_images'"):
        parse_document(doc)


def test_edge_group_cannot_be_nested():
    doc = base_doc()
    doc["graph"]["edges"][0]["group"] = {"gog": base_doc()}
    with pytest.raises(DocumentError, match="edge groups must be finite tables"):
        parse_document(doc)


def test_unknown_group_spec_is_a_document_error():
    doc = base_doc()
    doc["graph"]["vertices"][0]["group"] = "waffle 3"
    with pytest.raises(DocumentError):
        parse_document(doc)


def test_image_array_length_checked():
    doc = base_doc()
    doc["graph"]["edges"][0]["d0_images"] = [0]
    with pytest.raises(DocumentError, match="must have length 2"):
        parse_document(doc)


def test_image_index_range_checked():
    doc = base_doc()
    doc["graph"]["edges"][0]["d1_images"] = [0, 9]
    with pytest.raises(DocumentError, match="element index 9 out of range"):
        parse_document(doc)


def test_table_images_must_be_indices():
    doc = base_doc()
    doc["graph"]["edges"][0]["d1_images"] = [0, "w:g3"]
    with pytest.raises(DocumentError, match="images must be element indices"):
        parse_document(doc)


def test_composite_images_must_be_words():
    doc = json.loads(fixture_text("expand_demo"))
    doc["graph"]["edges"][0]["d1_images"] = [0, 1]
    with pytest.raises(DocumentError, match="must be word strings"):
        parse_document(doc)


def test_spanning_tree_must_list_edge_ids():
    doc = base_doc()
    doc["spanning_tree"] = ["zz"]
    with pytest.raises(DocumentError, match="spanning_tree must list edge ids"):
        parse_document(doc)


def test_spanning_tree_size_checked():
    doc = json.loads(fixture_text("c4c2c4"))
    doc["spanning_tree"] = ["e1"]
    with pytest.raises(DocumentError, match="wrong number of edges"):
        parse_document(doc)


def test_spanning_tree_must_connect():
    doc = json.loads(fixture_text("c4c2c4"))
    extra = dict(doc["graph"]["edges"][0])
    extra["id"] = "e1b"
    doc["graph"]["edges"].append(extra)
    doc["spanning_tree"] = ["e1", "e1b"]
    with pytest.raises(DocumentError, match="does not connect all vertices"):
        parse_document(doc)


def test_basepoint_must_exist():
    doc = base_doc()
    doc["basepoint"] = "zz"
    with pytest.raises(DocumentError, match="basepoint 'zz' is not a vertex"):
        parse_document(doc)


def test_save_and_load_files(tmp_path):
    path = tmp_path / "copy.gog.json"
    save_document(load_fixture("c6hnn"), str(path), name="copy")
    doc = load_document(str(path))
    assert doc.name == "copy"
    assert sorted(doc.gog.graph.edges) == ["t"]


def test_load_missing_file():
    with pytest.raises(DocumentError, match="cannot read"):
        load_document("/no/such/file.gog.json")
