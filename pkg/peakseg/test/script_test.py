# -*- coding: utf-8 -*-
import json
import os

import mock
import pytest

from peakseg import __version__, script
from peakseg.gradcheck import CheckResult
from peakseg.retrieval.segment import InstancePrediction
from peakseg.storage import load_dataset, load_predictions, save_predictions


@pytest.fixture
def run(test_ini):
    def run(*argv):
        return script.main(['--config', test_ini] + list(argv))
    return run


@pytest.fixture
def data(tmpdir, run):
    root = str(tmpdir.join('data'))
    assert run('gen-data', root, '--train', '3', '--val', '2',
               '--seed', '7') == 0
    return root


@pytest.fixture
def weights(tmpdir, run, data):
    path = str(tmpdir.join('model.weights'))
    assert run('train-toy', os.path.join(data, 'train'), path,
               '--steps', '2', '--width', '2') == 0
    return path


def read_report(directory):
    with open(os.path.join(directory, 'report.json')) as fp:
        return {r['name']: r['aggregate'] for r in json.load(fp)}


def test_version(capsys):
    assert script.main(['version']) == 0
    assert capsys.readouterr().out.strip() == 'peakseg ' + __version__


def test_unknown_flag_is_a_usage_error(run):
    assert run('gradcheck', '--no-such-flag') == 2


def test_missing_command_is_a_usage_error():
    assert script.main([]) == 2


def test_missing_config_file(tmpdir):
    assert script.main(['--config', str(tmpdir.join('nope.ini')),
                        'version']) == 2


def test_bad_setting_is_a_usage_error(tmpdir):
    ini = tmpdir.join('bad.ini')
    ini.write('[peakseg]\nstimulation.radius = zero\n')
    assert script.main(['--config', str(ini), 'gradcheck']) == 2


def test_bad_flag_value_is_a_usage_error(run):
    assert run('train-toy', 'data', 'out', '--lr', 'fast') == 2


def test_missing_dataset(tmpdir, run):
    assert run('segment', str(tmpdir.join('nothing')),
               str(tmpdir.join('out.jsonl')), '--strategy', 'rect') == 2


def test_gen_data_layout(data):
    for split, count in (('train', 3), ('val', 2)):
        directory = os.path.join(data, split)
        assert os.path.exists(os.path.join(directory, 'proposals.jsonl'))
        samples = load_dataset(directory)
        assert len(samples) == count
        assert all(s.image.shape == (3, 32, 32) for s in samples)
    val = load_dataset(os.path.join(data, 'val'))
    assert [s.image_id for s in val] == ['000003', '000004']


def test_seed_flag_sets_the_data_seed(tmpdir, run, data):
    again = str(tmpdir.join('again'))
    assert run('gen-data', again, '--train', '3', '--val', '2',
               '--seed', '7') == 0
    with open(os.path.join(data, 'val', 'index.json')) as a, \
            open(os.path.join(again, 'val', 'index.json')) as b:
        assert json.load(a) == json.load(b)


def test_train_writes_weights(weights):
    assert os.path.getsize(weights) > 0


def test_segment_and_evaluate(tmpdir, run, data, weights, capsys):
    val = os.path.join(data, 'val')
    predictions = str(tmpdir.join('predictions.jsonl'))
    assert run('segment', val, predictions, '--weights', weights) == 0
    out = str(tmpdir.join('report'))
    assert run('eval', val, predictions, '--weights', weights,
               '--localization', '--prms', '--out', out) == 0
    report = read_report(out)
    for name in ('map_r@0.25', 'map_r@0.5', 'map_r@0.75', 'abo', 'miou',
                 'pointwise_localization_map', 'prm_quality'):
        assert 0.0 <= report[name] <= 1.0
    assert 'miou' in capsys.readouterr().out
    assert os.path.exists(os.path.join(out, 'report.txt'))


def test_segment_with_workers_matches_serial(tmpdir, run, data, weights):
    val = os.path.join(data, 'val')
    serial = tmpdir.join('serial.jsonl')
    threaded = tmpdir.join('threaded.jsonl')
    assert run('segment', val, str(serial), '--weights', weights) == 0
    assert run('--workers', '2', 'segment', val, str(threaded),
               '--weights', weights) == 0
    assert serial.read() == threaded.read()


def test_prm_strategy_needs_weights(tmpdir, run, data):
    assert run('segment', os.path.join(data, 'val'),
               str(tmpdir.join('p.jsonl'))) == 2


def test_empty_proposal_file(tmpdir, run, data, weights):
    empty = tmpdir.join('empty.jsonl')
    empty.write('')
    assert run('segment', os.path.join(data, 'val'),
               str(tmpdir.join('p.jsonl')), '--weights', weights,
               '--proposals', str(empty)) == 2


def test_corrupt_weights_are_a_format_error(tmpdir, run, data):
    broken = tmpdir.join('broken.weights')
    broken.write_binary(b'{"version": 1}')
    assert run('segment', os.path.join(data, 'val'),
               str(tmpdir.join('p.jsonl')), '--weights', str(broken)) == 1


@pytest.mark.parametrize('strategy', ['rect', 'ellipse', 'proposal'])
def test_box_baselines(tmpdir, run, data, strategy):
    predictions = str(tmpdir.join('p.jsonl'))
    assert run('segment', os.path.join(data, 'val'), predictions,
               '--strategy', strategy) == 0
    loaded = load_predictions(predictions)
    samples = load_dataset(os.path.join(data, 'val'))
    assert sum(len(p) for p in loaded.values()) == sum(
        s.num_instances for s in samples)


def test_ground_truth_scores_perfectly(tmpdir, run, data):
    val = os.path.join(data, 'val')
    samples = load_dataset(val)
    path = str(tmpdir.join('truth.jsonl'))
    save_predictions(path, {
        s.image_id: [InstancePrediction(cls, 1.0, mask, image_id=s.image_id)
                     for cls, mask in s.masks]
        for s in samples})
    out = str(tmpdir.join('report'))
    assert run('eval', val, path, '--out', out) == 0
    report = read_report(out)
    for name in ('map_r@0.25', 'map_r@0.5', 'map_r@0.75', 'abo', 'miou'):
        assert report[name] == 1.0


def test_eval_rejects_unknown_images(tmpdir, run, data):
    path = str(tmpdir.join('p.jsonl'))
    sample = load_dataset(os.path.join(data, 'train'))[0]
    cls, mask = sample.masks[0]
    save_predictions(path, {'999999': [InstancePrediction(cls, 1.0, mask)]})
    assert run('eval', os.path.join(data, 'val'), path) == 2


def test_eval_extras_need_weights(tmpdir, run, data):
    path = tmpdir.join('p.jsonl')
    path.write('')
    assert run('eval', os.path.join(data, 'val'), str(path),
               '--prms') == 2


def test_infer_writes_maps(tmpdir, run, data, weights):
    out = tmpdir.join('infer')
    assert run('infer', weights, os.path.join(data, 'val'), str(out)) == 0
    with open(str(out.join('000003_peaks.json'))) as fp:
        listing = json.load(fp)
    assert listing['image_id'] == '000003'
    assert len(listing['scores']) == 3
    assert out.join('000003_crm.pgm').check()
    first = listing['peaks'][0]
    assert out.join('000003_prm_{}_0.pgm'.format(first['class'])).check()


def test_infer_with_workers_into_a_new_directory(tmpdir, run, data, weights):
    val = os.path.join(data, 'val')
    serial = tmpdir.join('serial')
    threaded = tmpdir.join('fresh', 'threaded')
    assert run('infer', weights, val, str(serial)) == 0
    assert run('--workers', '4', 'infer', weights, val, str(threaded)) == 0
    assert sorted(os.listdir(str(threaded))) == sorted(
        os.listdir(str(serial)))
    for name in os.listdir(str(serial)):
        assert threaded.join(name).read_binary() == \
            serial.join(name).read_binary()


def test_sweep(tmpdir, run, data, weights, capsys):
    out = str(tmpdir.join('sweep.json'))
    assert run('sweep-ab', weights, os.path.join(data, 'val'),
               '--betas', '0, 1', '--out', out) == 0
    with open(out) as fp:
        result = json.load(fp)
    assert [(p['alpha'], p['beta']) for p in result['grid']] == [
        (0.5, 0.0), (0.5, 1.0), (1.0, 0.0), (1.0, 1.0)]
    assert 'best alpha=' in capsys.readouterr().out


def test_gradcheck_passes(run, capsys):
    assert run('gradcheck', '--seed', '1', '--trials', '2') == 0
    assert '0 failed' in capsys.readouterr().out


def test_gradcheck_failure_exit_code(run):
    failed = [CheckResult('conv', 1, 1.0)]
    with mock.patch.object(script, 'failures', return_value=failed):
        assert run('gradcheck', '--trials', '1') == 1


def test_unexpected_errors_exit_with_one(run):
    with mock.patch.object(script, 'run_suite', side_effect=RuntimeError):
        assert run('gradcheck') == 1


def test_seed_flag_maps_to_the_command_setting():
    args = script.parser.parse_args(['gradcheck', '--seed', '4'])
    assert script._overrides(args) == {'gradcheck.seed': 4}
    args = script.parser.parse_args(['train-toy', 'a', 'b', '--seed', '4',
                                     '--lr', '0.5'])
    assert script._overrides(args) == {'train.seed': 4, 'train.lr': 0.5}
