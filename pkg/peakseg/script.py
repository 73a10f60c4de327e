# -*- coding: utf-8 -*-
from __future__ import print_function

import argparse
import concurrent.futures
import json
import logging
import os
import sys

import numpy as np
from pyramid import paster

from peakseg import __version__
from peakseg import config
from peakseg.errors import ConfigError, FormatError, UsageError
from peakseg.evaluation import abo, localize, map_r, merge_semantic, miou
from peakseg.evaluation import point_localization_ap, quality_breakdown
from peakseg.evaluation import quality_entry, semantic_labels
from peakseg.gradcheck import TOLERANCE, failures, run_suite
from peakseg.nn.network import network_forward, toy_network
from peakseg.relevance import peak_response_map
from peakseg.retrieval import ProposalGallery, box_masks, collect_peak_maps
from peakseg.retrieval import retrieve, synthesize_gallery
from peakseg.retrieval.baselines import STRATEGIES
from peakseg.stimulation.peaks import find_peaks
from peakseg.stimulation.pooling import stimulate_forward
from peakseg.stimulation.train import train_toy, training_pairs
from peakseg.storage import load_dataset, load_predictions, load_proposals
from peakseg.storage import load_weights, save_dataset, save_predictions
from peakseg.storage import save_proposals, save_weights, write_atomic
from peakseg.storage.pgm import write_heatmap
from peakseg.sweep import sweep_alpha_beta
from peakseg.synthetic import gen_synthetic

log = logging.getLogger('peakseg.script')

LOG_FORMAT = '%(asctime)s [%(process)d] [%(name)s:%(levelname)s] %(message)s'
PROPOSALS = 'proposals.jsonl'


parser = argparse.ArgumentParser(
    'peakseg',
    description='Weakly supervised instance segmentation with peak '
                'response maps')
parser.add_argument('--config', metavar='INI',
                    help='ini file with a [peakseg] section (default: '
                         '$PEAKSEG_CONFIG)')
parser.add_argument('--workers', type=int, metavar='N',
                    help='threads for per-image work')
parser.add_argument('--verbose', action='store_true',
                    help='log debug messages')

subparsers = parser.add_subparsers(title='command', dest='command')
subparsers.required = True


def _add_seed(parser, default_key):
    parser.add_argument('--seed', type=int,
                        help='random seed (setting {})'.format(default_key))
    parser.set_defaults(seed_key=default_key)


def _fan_out(func, items, workers):
    """``map`` over ``items`` on ``workers`` threads, keeping input order."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def _require(path):
    if not os.path.exists(path):
        raise UsageError('{} does not exist'.format(path))
    return path


def _load_net(path):
    return load_weights(_require(path)).validate()


def _load_samples(path):
    _require(os.path.join(path, 'index.json'))
    return load_dataset(path)


def _load_galleries(path):
    galleries = load_proposals(_require(path))
    if not galleries:
        raise UsageError('{} holds no proposals'.format(path))
    return galleries


def _gallery_for(galleries, image_id, path):
    if image_id not in galleries:
        raise UsageError('{} has no proposals for image {}'.format(
            path, image_id))
    return ProposalGallery(galleries[image_id])


def _write_json(path, data):
    write_atomic(path, json.dumps(data, sort_keys=True, indent=2) + '\n')


def gen_data(args, settings):
    """Generate a synthetic dataset with proposal galleries."""
    seed = settings['data.seed']
    options = dict(image_size=settings['data.image_size'],
                   num_classes=settings['data.num_classes'],
                   max_instances=settings['data.max_instances'])
    splits = [('train', 0, args.train), ('val', args.train, args.val)]
    for split, start, count in splits:
        samples = gen_synthetic(seed, count, start=start, **options)
        directory = os.path.join(args.out, split)
        save_dataset(directory, samples)
        galleries = {
            s.image_id: synthesize_gallery([m for _, m in s.masks],
                                           settings['data.distractors'],
                                           seed=s.seed)
            for s in samples}
        save_proposals(os.path.join(directory, PROPOSALS), galleries)
    return 0

parser_gen_data = subparsers.add_parser('gen-data', help=gen_data.__doc__)
parser_gen_data.add_argument('out', help='output directory')
parser_gen_data.add_argument('--train', type=int, default=400,
                             help='number of training samples')
parser_gen_data.add_argument('--val', type=int, default=100,
                             help='number of validation samples')
parser_gen_data.add_argument('--distractors', type=int,
                             help='jittered distractor proposals per image')
parser_gen_data.add_argument('--image-size', type=int)
parser_gen_data.add_argument('--num-classes', type=int)
parser_gen_data.add_argument('--max-instances', type=int)
_add_seed(parser_gen_data, 'data.seed')


def train(args, settings):
    """Train the toy network on a dataset and write its weights."""
    samples = _load_samples(args.data)
    num_classes = len(samples[0].labels) if samples else 0
    if num_classes < 1:
        raise UsageError('{} holds no samples'.format(args.data))
    net = toy_network(num_classes, in_channels=samples[0].image.shape[0],
                      width=settings['train.width'],
                      seed=settings['train.seed'])
    trained = train_toy(net, training_pairs(samples),
                        cfg=config.stimulation_config(settings),
                        **config.training_options(settings))
    save_weights(args.out, trained)
    return 0

parser_train = subparsers.add_parser('train-toy', help=train.__doc__)
parser_train.add_argument('data', help='dataset directory')
parser_train.add_argument('out', help='weights file to write')
parser_train.add_argument('--epochs', type=int)
parser_train.add_argument('--steps', type=int)
parser_train.add_argument('--lr', type=float)
parser_train.add_argument('--width', type=int)
parser_train.add_argument('--aggregation', choices=('peak', 'gap'))
_add_seed(parser_train, 'train.seed')


def infer(args, settings):
    """Write class response maps, peaks and peak response maps."""
    net = _load_net(args.weights)
    samples = _load_samples(args.data)
    cfg = config.stimulation_config(settings)

    def run(sample):
        trace, M = network_forward(net, sample.image)
        peaks = find_peaks(M, cfg)
        scores = stimulate_forward(M, peaks)
        prefix = os.path.join(args.out, sample.image_id)
        channels, height, width = M.shape
        write_heatmap(prefix + '_crm.pgm',
                      np.maximum(M, 0.0).reshape(channels * height, width))
        listing = []
        for cls in range(channels):
            for k, peak in enumerate(peaks.for_class(cls)):
                prm = peak_response_map(net, trace, peak)
                write_heatmap('{}_prm_{}_{}.pgm'.format(prefix, cls, k),
                              prm.R)
                listing.append({'class': cls, 'row': peak.row,
                                'col': peak.col, 'value': peak.value,
                                'fallback': peak.fallback,
                                'leaked_mass': prm.leaked_mass})
        _write_json(prefix + '_peaks.json',
                    {'image_id': sample.image_id,
                     'scores': [float(s) for s in scores],
                     'peaks': listing})

    _fan_out(run, samples, settings['pipeline.workers'])
    log.info('wrote inference results for %d images to %s', len(samples),
             args.out)
    return 0

parser_infer = subparsers.add_parser('infer', help=infer.__doc__)
parser_infer.add_argument('weights', help='weights file')
parser_infer.add_argument('data', help='dataset directory')
parser_infer.add_argument('out', help='output directory')


def segment(args, settings):
    """Predict instance masks and write them as JSON lines."""
    samples = _load_samples(args.data)
    strategy = args.strategy
    proposals_path = args.proposals or os.path.join(args.data, PROPOSALS)
    galleries = None
    if strategy in ('prm', 'proposal'):
        galleries = _load_galleries(proposals_path)
    net = None
    if strategy == 'prm':
        if not args.weights:
            raise UsageError('the prm strategy needs --weights')
        net = _load_net(args.weights)
    cfg = config.stimulation_config(settings)
    params = config.retrieval_params(settings)

    def run(sample):
        gallery = None
        if galleries is not None:
            gallery = _gallery_for(galleries, sample.image_id, proposals_path)
        if strategy == 'prm':
            peak_maps = collect_peak_maps(net, sample.image, cfg, params)
            predictions = retrieve(peak_maps, gallery, params,
                                   image_id=sample.image_id)
        else:
            predictions = box_masks(sample.boxes, sample.shape, strategy,
                                    gallery=gallery, image_id=sample.image_id)
        log.debug('%s: %d instances', sample.image_id, len(predictions))
        return sample.image_id, predictions

    results = _fan_out(run, samples, settings['pipeline.workers'])
    save_predictions(args.out, dict(results))
    return 0

parser_segment = subparsers.add_parser('segment', help=segment.__doc__)
parser_segment.add_argument('data', help='dataset directory')
parser_segment.add_argument('out', help='predictions file to write')
parser_segment.add_argument('--weights', help='weights file (prm strategy)')
parser_segment.add_argument('--proposals',
                            help='proposal file (default: DATA/{})'.format(
                                PROPOSALS))
parser_segment.add_argument('--strategy', default='prm',
                            choices=('prm',) + STRATEGIES)
parser_segment.add_argument('--alpha', type=float)
parser_segment.add_argument('--beta', type=float)


def _prm_entries(net, sample, cfg):
    """Quality entries for the peaks of the sample's labelled classes."""
    trace, M = network_forward(net, sample.image)
    peaks = find_peaks(M, cfg)
    entries = []
    for cls in np.flatnonzero(sample.labels):
        for peak in peaks.for_class(int(cls)):
            prm = peak_response_map(net, trace, peak)
            entries.append(quality_entry(prm, sample))
    return entries


def evaluate(args, settings):
    """Report metrics of a predictions file against a dataset."""
    samples = _load_samples(args.data)
    by_id = {s.image_id: s for s in samples}
    predictions = load_predictions(_require(args.predictions))
    unknown = set(predictions) - set(by_id)
    if unknown:
        raise UsageError('predictions for unknown images: {}'.format(
            ', '.join(sorted(str(i) for i in unknown))))
    for sample in samples:
        predictions.setdefault(sample.image_id, [])

    num_classes = len(samples[0].labels) if samples else 0
    reports = [r for _, r in sorted(map_r(predictions, by_id).items())]
    reports.append(abo(predictions, by_id))
    reports.append(miou(
        [merge_semantic(predictions[s.image_id], num_classes, s.shape)
         for s in samples],
        [semantic_labels(s) for s in samples], num_classes))

    if args.localization or args.prms:
        if not args.weights:
            raise UsageError('--localization and --prms need --weights')
        net = _load_net(args.weights)
        cfg = config.stimulation_config(settings)
        workers = settings['pipeline.workers']
        if args.localization:
            records = _fan_out(
                lambda s: localize(net, s.image, cfg, image_id=s.image_id),
                samples, workers)
            reports.append(point_localization_ap(records, by_id))
        if args.prms:
            entries = [e for chunk in _fan_out(
                lambda s: _prm_entries(net, s, cfg), samples, workers)
                for e in chunk]
            breakdown = quality_breakdown(entries)
            reports.extend(breakdown[k] for k in sorted(breakdown))

    text = '\n'.join(r.format() for r in reports)
    print(text)
    if args.out:
        _write_json(os.path.join(args.out, 'report.json'),
                    [r.to_dict() for r in reports])
        write_atomic(os.path.join(args.out, 'report.txt'), text + '\n')
    return 0

parser_eval = subparsers.add_parser('eval', help=evaluate.__doc__)
parser_eval.add_argument('data', help='dataset directory')
parser_eval.add_argument('predictions', help='predictions file')
parser_eval.add_argument('--out', help='directory for report files')
parser_eval.add_argument('--weights',
                         help='weights file for --localization / --prms')
parser_eval.add_argument('--localization', action='store_true',
                         help='report pointwise localization mAP')
parser_eval.add_argument('--prms', action='store_true',
                         help='report peak response map quality')


def gradcheck(args, settings):
    """Check analytic gradients against finite differences."""
    results = run_suite(seed=settings['gradcheck.seed'],
                        trials=settings['gradcheck.trials'])
    failed = failures(results)
    worst = max(results, key=lambda r: r.max_error)
    print('{} checks, {} failed, worst {} (seed {}): {:.3e}'.format(
        len(results), len(failed), worst.name, worst.seed, worst.max_error))
    for result in failed:
        log.error('%s seed %d: relative error %.3e >= %g', result.name,
                  result.seed, result.max_error, TOLERANCE)
    return 1 if failed else 0

parser_gradcheck = subparsers.add_parser('gradcheck', help=gradcheck.__doc__)
parser_gradcheck.add_argument('--trials', type=int)
_add_seed(parser_gradcheck, 'gradcheck.seed')


def sweep(args, settings):
    """Grid-search the retrieval weights on a validation split."""
    net = _load_net(args.weights)
    samples = _load_samples(args.data)
    proposals_path = args.proposals or os.path.join(args.data, PROPOSALS)
    galleries = _load_galleries(proposals_path)
    by_id = {s.image_id: s for s in samples}
    gallery_by_id = {image_id: _gallery_for(galleries, image_id,
                                            proposals_path)
                     for image_id in by_id}
    cfg = config.stimulation_config(settings)
    params = config.retrieval_params(settings)
    peak_maps = dict(_fan_out(
        lambda s: (s.image_id, collect_peak_maps(net, s.image, cfg, params)),
        samples, settings['pipeline.workers']))
    result = sweep_alpha_beta(net, by_id, gallery_by_id,
                              settings['sweep.alphas'],
                              settings['sweep.betas'], cfg, params,
                              peak_maps=peak_maps)
    best = result.best
    print('best alpha={:g} beta={:g}: map_r@0.5 {:.2f}%'.format(
        best.alpha, best.beta, 100 * best.score))
    if args.out:
        _write_json(args.out, result.to_dict())
    return 0

parser_sweep = subparsers.add_parser('sweep-ab', help=sweep.__doc__)
parser_sweep.add_argument('weights', help='weights file')
parser_sweep.add_argument('data', help='validation dataset directory')
parser_sweep.add_argument('--proposals',
                          help='proposal file (default: DATA/{})'.format(
                              PROPOSALS))
parser_sweep.add_argument('--alphas', help='comma separated alpha values')
parser_sweep.add_argument('--betas', help='comma separated beta values')
parser_sweep.add_argument('--out', help='JSON file for the grid')


def version(args, settings):
    """Print the package version"""
    print('{prog} {version}'.format(prog=parser.prog, version=__version__))
    return 0

parser_version = subparsers.add_parser('version', help=version.__doc__)


COMMANDS = {
    'eval': evaluate,
    'gen-data': gen_data,
    'gradcheck': gradcheck,
    'infer': infer,
    'segment': segment,
    'sweep-ab': sweep,
    'train-toy': train,
    'version': version,
}

# command line flag -> setting it overrides
FLAG_SETTINGS = {
    'workers': 'pipeline.workers',
    'distractors': 'data.distractors',
    'image_size': 'data.image_size',
    'num_classes': 'data.num_classes',
    'max_instances': 'data.max_instances',
    'epochs': 'train.epochs',
    'steps': 'train.steps',
    'lr': 'train.lr',
    'width': 'train.width',
    'aggregation': 'train.aggregation',
    'alpha': 'retrieval.alpha',
    'beta': 'retrieval.beta',
    'alphas': 'sweep.alphas',
    'betas': 'sweep.betas',
    'trials': 'gradcheck.trials',
}


def _overrides(args):
    overrides = {key: getattr(args, flag)
                 for flag, key in FLAG_SETTINGS.items()
                 if getattr(args, flag, None) is not None}
    if getattr(args, 'seed', None) is not None:
        overrides[args.seed_key] = args.seed
    return overrides


def _setup_logging(config_uri, verbose):
    if config_uri:
        paster.setup_logging(config_uri)
    else:
        logging.basicConfig(level=logging.INFO, format=LOG_FORMAT)
    if verbose:
        logging.getLogger('peakseg').setLevel(logging.DEBUG)


def main(argv=None):
    """Run the command line; returns the exit code.

    0 on success, 2 for usage and configuration errors (including missing
    input files), 1 for anything else.
    """
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code

    config_uri = args.config or os.environ.get(config.CONFIG_ENV)
    try:
        if config_uri:
            _require(config_uri)
        _setup_logging(config_uri, args.verbose)
        settings = config.get_settings(config_uri, _overrides(args))
        return COMMANDS[args.command](args, settings)
    except (UsageError, ConfigError) as exc:
        log.error('%s', exc)
        print('peakseg: error: {}'.format(exc), file=sys.stderr)
        return 2
    except FormatError as exc:
        log.error('unreadable input (format error %d): %s', exc.code, exc)
        return 1
    except Exception:
        log.exception('%s failed', args.command)
        return 1


if __name__ == '__main__':
    sys.exit(main())
