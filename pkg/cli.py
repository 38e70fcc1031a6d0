#!/usr/bin/env python3
"""
Command-line interface for the Nielsen zeta calculator
"""

import csv
import functools
import json
import logging
import random
import sys
from typing import Dict, List, Optional

import click
import mpmath
from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from asymptotics import (AsymptoticExpansion, eval_expansion, expansion_table, fit_expansion,
                         leading_ratio, ratio_error_bound, sweep_entropy, synthesize_samples)
from corpus import CORPUS_KINDS, generate_corpus, random_word
from descriptor_io import dumps_samples, load_document, load_samples, radical_to_machine
from descriptors import MapDescriptor, Periodic, SubshiftMarkov, describe, fixed_point_counts, nielsen_sequence
from rational_radical import (Polynomial, RadicalExpr, format_radical, is_rational, radical_index,
                              rr_expand)
from twisted_conjugacy import (FreeEndomorphism, abelianization, are_twisted_conjugate_bounded,
                               class_count_lower_bound, format_word, mapping_torus_crosscheck, parse_endomorphism,
                               parse_word, reidemeister_cokernel, reidemeister_number_abelian,
                               twisted_conjugate_action)
from zeta_assembly import ZetaAssembler, checked_p_values, definition_series, nielsen_from_zeta
from zeta_config import ZetaSettings, load_settings
from zeta_errors import (EXIT_FAILURE, EXIT_RECONSTRUCTION_FAILURE, EXIT_VERIFICATION_MISMATCH,
                         DocumentError, ReconstructionError, ZetaError)

console = Console()
err_console = Console(stderr=True)
logger = logging.getLogger(__name__)

format_option = click.option('--format', 'output_format', type=click.Choice(['text', 'machine']),
                             default='text', show_default=True, help='Rich tables or JSON on stdout')
out_option = click.option('--out', type=click.Path(dir_okay=False, writable=True), default=None,
                          help='Also write the table as CSV')


def handle_errors(func):
    """Map calculator errors to their exit codes"""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ZetaError as e:
            err_console.print(f"[red]Error ({type(e).__name__}): {escape(str(e))}[/red]")
            sys.exit(e.exit_code)
        except KeyboardInterrupt:
            err_console.print("\n[yellow]Interrupted by user[/yellow]")
            sys.exit(EXIT_FAILURE)
    return wrapper


def header(title: str, subtitle: str):
    console.print(Panel.fit(f"[bold blue]{escape(title)}[/bold blue]\n[dim]{escape(subtitle)}[/dim]",
                            border_style="blue"))


def emit_machine(payload: Dict):
    click.echo(json.dumps(payload, indent=2))


def write_csv(path: str, rows: List[Dict]):
    """Export rows through csv.DictWriter, header from the first row"""
    if not rows:
        return
    with open(path, 'w', newline='') as csvfile:
        writer = csv.DictWriter(csvfile, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    err_console.print(f"[green]✓[/green] Table exported to {escape(path)}")


def load_descriptor(path: str) -> MapDescriptor:
    document = load_document(path)
    if isinstance(document, FreeEndomorphism):
        raise DocumentError("expected a map descriptor, got a free_endomorphism document", path='type')
    return document


def settings_from(ctx: click.Context, **overrides) -> ZetaSettings:
    return ctx.obj['settings'].with_overrides(**overrides)


@click.group()
@click.option('--config', type=click.Path(exists=True, dir_okay=False), default=None,
              help='Settings file (defaults to zeta_config.json)')
@click.option('--verbose', '-v', is_flag=True, help='Debug logging on stderr')
@click.pass_context
def main(ctx, config, verbose):
    """Nielsen zeta functions in closed form, twisted conjugacy and counting asymptotics"""
    try:
        settings = load_settings(config)
    except ZetaError as e:
        err_console.print(f"[red]Error: {escape(str(e))}[/red]")
        sys.exit(e.exit_code)
    logging.basicConfig(
        level=logging.DEBUG if verbose else getattr(logging, settings.log_level.upper(), logging.INFO),
        format='%(asctime)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    ctx.obj = {'settings': settings}


# --- zeta ----------------------------------------------------------------

@main.command()
@click.argument('document', type=click.Path(exists=True, dir_okay=False))
@click.option('--order', type=click.IntRange(min=0), default=None, help='Truncation order T')
@click.option('--max-den-degree', type=click.IntRange(min=1), default=None,
              help='Denominator degree bound for reconstruction')
@click.option('--series', 'show_series', is_flag=True, help='Also list the first T coefficients')
@click.option('--from-series', is_flag=True, help='Find the closed form by reconstruction only')
@click.option('--require-closed-form', is_flag=True, help='Fail when no closed form is found')
@format_option
@click.pass_context
@handle_errors
def zeta(ctx, document, order, max_den_degree, show_series, from_series, require_closed_form, output_format):
    """Closed form of the Nielsen zeta function of a descriptor"""
    settings = settings_from(ctx, order=order, max_den_degree=max_den_degree)
    descriptor = load_descriptor(document)
    assembler = ZetaAssembler(settings)

    form: Optional[RadicalExpr] = None
    failure = None
    try:
        form = assembler.zeta_from_series(descriptor) if from_series else assembler.zeta(descriptor)
    except ReconstructionError as e:
        if require_closed_form:
            raise
        failure = str(e)
        logger.warning(f"No closed form: {failure}")

    series = None
    if show_series or form is None:
        series = rr_expand(form, settings.order) if form is not None else definition_series(descriptor, settings.order)

    if output_format == 'machine':
        payload = {'descriptor': describe(descriptor)}
        if form is not None:
            payload.update({'text': format_radical(form), 'closed_form': radical_to_machine(form),
                            'rational': is_rational(form), 'radical_index': radical_index(form)})
        else:
            payload['reconstruction_failure'] = failure
        if series is not None:
            payload['series'] = [str(c) for c in series.coeffs]
        emit_machine(payload)
        return

    header("Nielsen Zeta Function", describe(descriptor))
    if form is not None:
        console.print(f"[bold]Closed form:[/bold] {escape(format_radical(form))}")
        console.print(f"[bold]Rational:[/bold] {'yes' if is_rational(form) else 'no'}")
        console.print(f"[bold]Radical index:[/bold] {radical_index(form)}")
        if isinstance(descriptor, Periodic):
            table = Table(title="P(d) by divisor", show_header=True, header_style="bold magenta")
            table.add_column("d", justify="right")
            table.add_column("N_d", justify="right")
            table.add_column("P(d)", justify="right")
            for d, p in checked_p_values(descriptor).items():
                table.add_row(str(d), str(descriptor.table[d]), str(p))
            console.print(table)
    else:
        console.print(f"[yellow]No closed form found: {escape(failure)}[/yellow]")
        console.print("[dim]Series mode below is exact.[/dim]")
    if series is not None:
        table = Table(title=f"Series to order {series.order}", show_header=True, header_style="bold magenta")
        table.add_column("n", justify="right")
        table.add_column("coefficient", justify="right")
        for n, c in enumerate(series.coeffs):
            table.add_row(str(n), str(c))
        console.print(table)


# --- verify --------------------------------------------------------------

def corrupt_closed_form(form: RadicalExpr) -> RadicalExpr:
    """Flip the sign of the first exponent"""
    if form.is_one():
        return RadicalExpr.from_factors([(Polynomial.one_minus_z_power(1), 1)])
    (poly, exponent), rest = form.factors[0], form.factors[1:]
    return RadicalExpr.from_factors([(poly, -exponent)] + list(rest))


@main.command()
@click.argument('document', type=click.Path(exists=True, dir_okay=False), required=False)
@click.option('--order', type=click.IntRange(min=0), default=None, help='Truncation order T')
@click.option('--max-den-degree', type=click.IntRange(min=1), default=None)
@click.option('--corpus', type=click.Choice(sorted(CORPUS_KINDS)), default=None,
              help='Verify a seeded random corpus instead of a document')
@click.option('--count', type=click.IntRange(min=1), default=20, show_default=True)
@click.option('--seed', type=int, default=None, help='Corpus seed (defaults to the configured seed)')
@click.option('--corrupt', is_flag=True, hidden=True)
@format_option
@click.pass_context
@handle_errors
def verify(ctx, document, order, max_den_degree, corpus, count, seed, corrupt, output_format):
    """Check closed forms against exp(sum N(f^n)/n z^n)"""
    settings = settings_from(ctx, order=order, max_den_degree=max_den_degree, seed=seed)
    if (document is None) == (corpus is None):
        raise click.UsageError("give either a DOCUMENT or --corpus KIND")
    assembler = ZetaAssembler(settings)

    if corpus is None:
        descriptor = load_descriptor(document)
        form = corrupt_closed_form(assembler.zeta(descriptor)) if corrupt else None
        report = assembler.verify(descriptor, settings.order, form)
        form = report.closed_form
        recovered = nielsen_from_zeta(form, min(settings.order, 10)) if form is not None else []
        if output_format == 'machine':
            payload = {'descriptor': report.descriptor, 'order': report.order, 'agree': report.agree,
                       'first_mismatch': report.first_mismatch,
                       'recovered_nielsen': [str(v) for v in recovered]}
            if form is not None:
                payload['closed_form'] = format_radical(form)
            else:
                payload['reconstruction_failure'] = report.failure
            emit_machine(payload)
        else:
            header("Verification", report.descriptor)
            if form is not None:
                console.print(f"[bold]Closed form:[/bold] {escape(format_radical(form))}")
                console.print(f"[bold]Recovered N(f^n):[/bold] {', '.join(str(v) for v in recovered)}")
            colour = 'green' if report.agree else 'red'
            console.print(f"[bold {colour}]{escape(report.summary())}[/bold {colour}]")
        if report.failure:
            sys.exit(EXIT_RECONSTRUCTION_FAILURE)
        if not report.agree:
            sys.exit(EXIT_VERIFICATION_MISMATCH)
        return

    descriptors = generate_corpus(corpus, count, settings.seed)
    rows = []
    mismatches = failures = 0
    for i, descriptor in enumerate(descriptors):
        report = assembler.verify(descriptor, settings.order)
        if report.failure:
            status = 'no closed form'
            failures += 1
        else:
            status = 'agree' if report.agree else f"mismatch at {report.first_mismatch}"
            mismatches += not report.agree
        rows.append({'index': i, 'descriptor': describe(descriptor), 'status': status})

    if output_format == 'machine':
        emit_machine({'corpus': corpus, 'seed': settings.seed, 'order': settings.order, 'results': rows})
    else:
        header("Corpus Verification", f"{count} {corpus} descriptors, seed {settings.seed}, order {settings.order}")
        table = Table(show_header=True, header_style="bold magenta")
        table.add_column("#", justify="right")
        table.add_column("Descriptor")
        table.add_column("Status")
        for row in rows:
            style = 'green' if row['status'] == 'agree' else 'red'
            table.add_row(str(row['index']), escape(row['descriptor']), f"[{style}]{row['status']}[/{style}]")
        console.print(table)
        console.print(f"[bold]{len(rows) - mismatches - failures}/{len(rows)} agree[/bold]")
    if mismatches:
        sys.exit(EXIT_VERIFICATION_MISMATCH)
    if failures:
        sys.exit(EXIT_RECONSTRUCTION_FAILURE)


# --- nielsen -------------------------------------------------------------

@main.command()
@click.argument('document', type=click.Path(exists=True, dir_okay=False))
@click.option('--n-max', type=click.IntRange(min=1), default=10, show_default=True)
@click.option('--fixed-points', is_flag=True, help='Add Artin-Mazur fixed point counts (subshifts)')
@format_option
@out_option
@click.pass_context
@handle_errors
def nielsen(ctx, document, n_max, fixed_points, output_format, out):
    """List the Nielsen numbers N(f^n) for n = 1..n_max"""
    descriptor = load_descriptor(document)
    values = nielsen_sequence(descriptor, n_max)
    rows = [{'n': n, 'nielsen': v} for n, v in enumerate(values, 1)]
    if fixed_points:
        if not isinstance(descriptor, SubshiftMarkov):
            raise click.UsageError("--fixed-points needs a subshift_markov document")
        for row, count in zip(rows, fixed_point_counts(descriptor, n_max)):
            row['fixed_points'] = count
    if out:
        write_csv(out, rows)

    if output_format == 'machine':
        emit_machine({'descriptor': describe(descriptor), 'nielsen': values, 'rows': rows})
        return
    header("Nielsen Numbers", describe(descriptor))
    table = Table(show_header=True, header_style="bold magenta")
    for column in rows[0]:
        table.add_column(column, justify="right")
    for row in rows:
        table.add_row(*(str(v) for v in row.values()))
    console.print(table)


# --- twisted -------------------------------------------------------------

def resolve_endomorphism(phi: Optional[str], inverse: Optional[str], document: Optional[str]) -> FreeEndomorphism:
    if document:
        endomorphism = load_document(document)
        if not isinstance(endomorphism, FreeEndomorphism):
            raise DocumentError("expected a free_endomorphism document", path='type')
        return endomorphism
    if not phi:
        raise click.UsageError("give --phi 'a -> ..., b -> ...' or --document")
    endomorphism = parse_endomorphism(phi)
    if inverse:
        endomorphism = endomorphism.with_inverse(parse_endomorphism(inverse))
    return endomorphism


def endomorphism_options(func):
    func = click.option('--document', type=click.Path(exists=True, dir_okay=False), default=None,
                        help='free_endomorphism document')(func)
    func = click.option('--inverse', default=None, help="Inverse images, e.g. 'a -> b, b -> b^-1 a'")(func)
    func = click.option('--phi', default=None, help="Generator images, e.g. 'a -> a b, b -> a'")(func)
    return func


@main.group()
def twisted():
    """Twisted conjugacy in free groups and mapping tori"""


@twisted.command()
@click.argument('x')
@click.argument('y')
@endomorphism_options
@click.option('--bound', type=click.IntRange(min=0), default=None, help='Conjugator length bound')
@format_option
@click.pass_context
@handle_errors
def check(ctx, x, y, phi, inverse, document, bound, output_format):
    """Search gamma with gamma x phi(gamma)^-1 = y"""
    settings = settings_from(ctx, twisted_bound=bound)
    endomorphism = resolve_endomorphism(phi, inverse, document)
    x_word, y_word = parse_word(x, endomorphism.rank), parse_word(y, endomorphism.rank)
    result = are_twisted_conjugate_bounded(x_word, y_word, endomorphism, settings.twisted_bound,
                                           settings.word_ball_limit)
    valid = result.found and twisted_conjugate_action(result.witness, x_word, endomorphism) == y_word
    if output_format == 'machine':
        emit_machine({'x': format_word(x_word), 'y': format_word(y_word), 'phi': str(endomorphism),
                      'bound': settings.twisted_bound, 'verdict': result.verdict.value,
                      'witness': format_word(result.witness) if result.found else None,
                      'witness_valid': valid, 'candidates_tried': result.candidates_tried})
        return
    header("Twisted Conjugacy", str(endomorphism))
    if result.found:
        console.print(f"[bold green]Yes[/bold green]: witness {escape(format_word(result.witness))} "
                      f"({'validated' if valid else 'INVALID'})")
    else:
        console.print(f"[yellow]Unknown[/yellow] after {result.candidates_tried} conjugators "
                      f"of length <= {settings.twisted_bound}")


@twisted.command()
@endomorphism_options
@click.option('--length', type=click.IntRange(min=1), default=None, help='Word length cutoff L')
@click.option('--bound', type=click.IntRange(min=0), default=None, help='Conjugator length bound')
@format_option
@out_option
@click.pass_context
@handle_errors
def classes(ctx, phi, inverse, document, length, bound, output_format, out):
    """Count bounded twisted-conjugacy cells among words of length <= L"""
    settings = settings_from(ctx, twisted_length=length, twisted_bound=bound)
    endomorphism = resolve_endomorphism(phi, inverse, document)
    report = class_count_lower_bound(endomorphism, settings.twisted_length, settings.twisted_bound,
                                     settings.word_ball_limit)
    abelian = abelianization(endomorphism)
    abelian_number = reidemeister_number_abelian(abelian)
    rows = report.rows()
    if out:
        write_csv(out, rows)
    if output_format == 'machine':
        emit_machine({'phi': str(endomorphism), 'norm': report.norm, 'bound': report.bound,
                      'lengths': report.lengths, 'cells': report.cells, 'words': report.words,
                      'unknown_fraction': report.unknown_fraction,
                      'abelian_reidemeister': str(abelian_number),
                      'abelian_invariants': list(reidemeister_cokernel(abelian))})
        return
    header("Twisted Class Cells", f"{endomorphism} ({report.norm})")
    table = Table(show_header=True, header_style="bold magenta")
    table.add_column("L", justify="right")
    table.add_column("cells", justify="right")
    for l, c in zip(report.lengths, report.cells):
        table.add_row(str(l), str(c))
    console.print(table)
    console.print(f"[bold]Words:[/bold] {report.words}   [bold]Unknown pair fraction:[/bold] "
                  f"{report.unknown_fraction:.4f}")
    console.print(f"[bold]Abelianized Reidemeister number:[/bold] {abelian_number} "
                  f"(invariants {list(reidemeister_cokernel(abelian))})")


@twisted.command()
@click.argument('x', required=False)
@click.argument('y', required=False)
@endomorphism_options
@click.option('--bound', type=click.IntRange(min=0), default=None, help='Conjugator length bound')
@click.option('--stable-range', type=click.IntRange(min=0), default=None,
              help='Largest |k| for conjugators gamma z^k in the mapping torus')
@click.option('--pairs', type=click.IntRange(min=1), default=20, show_default=True,
              help='Random pairs to check when X and Y are omitted')
@click.option('--seed', type=int, default=None)
@format_option
@click.pass_context
@handle_errors
def crosscheck(ctx, x, y, phi, inverse, document, bound, stable_range, pairs, seed, output_format):
    """Cross-check twisted conjugacy of x, y against conjugacy of xz, yz"""
    settings = settings_from(ctx, twisted_bound=bound, stable_range=stable_range, seed=seed)
    endomorphism = resolve_endomorphism(phi, inverse, document)
    if (x is None) != (y is None):
        raise click.UsageError("give both X and Y, or neither")
    if x is not None:
        samples = [(parse_word(x, endomorphism.rank), parse_word(y, endomorphism.rank))]
    else:
        rng = random.Random(settings.seed)
        samples = []
        for _ in range(pairs):
            first = random_word(rng, endomorphism.rank, 5)
            mode = rng.randrange(3)
            if mode == 0:
                second = endomorphism.apply(first)
            elif mode == 1:
                second = twisted_conjugate_action(random_word(rng, endomorphism.rank, 2), first, endomorphism)
            else:
                second = random_word(rng, endomorphism.rank, 5)
            samples.append((first, second))

    rows = []
    for first, second in samples:
        report = mapping_torus_crosscheck(first, second, endomorphism, settings.twisted_bound,
                                   settings.stable_range, settings.word_ball_limit)
        rows.append({
            'x': format_word(first), 'y': format_word(second),
            'twisted': report.twisted.verdict.value,
            'witness': format_word(report.twisted.witness) if report.twisted.found else '',
            'mapping_torus': report.conjugate_verdict.value,
            'conjugator': str(report.conjugator) if report.conjugator else '',
            'consistent': report.consistent,
        })
    inconsistent = sum(not row['consistent'] for row in rows)

    if output_format == 'machine':
        emit_machine({'phi': str(endomorphism), 'bound': settings.twisted_bound, 'results': rows,
                      'inconsistent': inconsistent})
    else:
        header("Mapping Torus Cross-check", str(endomorphism))
        table = Table(show_header=True, header_style="bold magenta")
        for column in ('x', 'y', 'twisted', 'witness', 'mapping torus', 'conjugator', 'ok'):
            table.add_column(column)
        for row in rows:
            table.add_row(escape(row['x']), escape(row['y']), row['twisted'], escape(row['witness']),
                          row['mapping_torus'], escape(row['conjugator']),
                          '[green]✓[/green]' if row['consistent'] else '[red]✗[/red]')
        console.print(table)
        if inconsistent:
            console.print(f"[bold red]{inconsistent} inconsistent pair(s)[/bold red]")
        else:
            console.print("[bold green]agreement: every Yes validated on both sides[/bold green]")
    if inconsistent:
        sys.exit(EXIT_VERIFICATION_MISMATCH)


twisted.add_command(crosscheck, name='lemma8')


# --- asym ----------------------------------------------------------------

def parse_reals(text: str) -> List[mpmath.mpf]:
    try:
        return [mpmath.mpf(item) for item in text.replace(',', ' ').split()]
    except ValueError as e:
        raise click.BadParameter(str(e))


def expansion_options(func):
    func = click.option('--odd-zero', is_flag=True, help='Require odd coefficients to vanish')(func)
    func = click.option('--coeffs', required=True, help="C0, C1, ..., e.g. '1,0,0.5'")(func)
    func = click.option('--h', 'entropy', default=None, help='Entropy h (defaults to the configured value)')(func)
    return func


def build_expansion(settings: ZetaSettings, entropy: Optional[str], coeffs: str, odd_zero: bool) -> AsymptoticExpansion:
    h = mpmath.mpf(entropy) if entropy is not None else mpmath.mpf(settings.asym_entropy)
    return AsymptoticExpansion(h, tuple(parse_reals(coeffs)), odd_zero)


@main.group()
def asym():
    """Counting-function asymptotics e^(hx)/x^(3/2) sum C_n/x^(n/2)"""


@asym.command(name='eval')
@expansion_options
@click.option('--x', 'xs', multiple=True, required=True, help='Norm cutoff (repeatable)')
@format_option
@out_option
@click.pass_context
@handle_errors
def asym_eval(ctx, entropy, coeffs, odd_zero, xs, output_format, out):
    """Evaluate the expansion at the given cutoffs"""
    settings = ctx.obj['settings']
    expansion = build_expansion(settings, entropy, coeffs, odd_zero)
    rows = []
    for x in xs:
        value = eval_expansion(expansion, mpmath.mpf(x), settings.asym_overflow_limit,
                               settings.asym_precision_digits)
        rows.append({'x': x, 'value': mpmath.nstr(value, 15)})
    if out:
        write_csv(out, rows)
    if output_format == 'machine':
        emit_machine({'expansion': expansion.describe(), 'rows': rows})
        return
    header("Asymptotic Expansion", expansion.describe())
    table = Table(show_header=True, header_style="bold magenta")
    table.add_column("x", justify="right")
    table.add_column("value", justify="right")
    for row in rows:
        table.add_row(row['x'], row['value'])
    console.print(table)


@asym.command()
@expansion_options
@click.option('--start', type=float, default=5.0, show_default=True, help='First cutoff x')
@click.option('--stop', type=float, default=20.0, show_default=True, help='Last cutoff x')
@click.option('--step', type=float, default=1.0, show_default=True)
@click.option('--rounded', is_flag=True, help='Round counts to integers')
@click.option('--out', type=click.Path(dir_okay=False, writable=True), default=None,
              help='Sample file to write (stdout when omitted)')
@click.pass_context
@handle_errors
def synth(ctx, entropy, coeffs, odd_zero, start, stop, step, rounded, out):
    """Write noiseless samples of an expansion as a two-column file"""
    settings = ctx.obj['settings']
    if step <= 0 or stop < start:
        raise click.BadParameter("need step > 0 and stop >= start")
    expansion = build_expansion(settings, entropy, coeffs, odd_zero)
    count = int(round((stop - start) / step)) + 1
    xs = [mpmath.mpf(start) + i * mpmath.mpf(step) for i in range(count)]
    samples = synthesize_samples(expansion, xs, rounded, settings.asym_precision_digits,
                                 settings.asym_overflow_limit)
    text = dumps_samples(samples, comment=f"x count, {expansion.describe()}")
    if out:
        with open(out, 'w') as f:
            f.write(text)
        err_console.print(f"[green]✓[/green] {len(samples)} samples written to {escape(out)}")
    else:
        click.echo(text, nl=False)


@asym.command()
@click.argument('samples', type=click.Path(exists=True, dir_okay=False))
@click.option('--h', 'entropy', default=None, help='Entropy h (defaults to the configured value)')
@click.option('--terms', type=click.IntRange(min=0), default=2, show_default=True, help='N, last coefficient index')
@click.option('--odd-zero', is_flag=True, help='Pin odd coefficients to zero')
@click.option('--sweep', default=None, help="Comma separated h grid; keeps the best fit")
@format_option
@out_option
@click.pass_context
@handle_errors
def fit(ctx, samples, entropy, terms, odd_zero, sweep, output_format, out):
    """Least-squares fit of C_0..C_N to a two-column sample file"""
    settings = ctx.obj['settings']
    data = load_samples(samples)
    digits, limit = settings.asym_precision_digits, settings.asym_overflow_limit
    residuals = None
    if sweep:
        result = sweep_entropy(data, parse_reals(sweep), terms, odd_zero, digits, limit)
        residuals, result = result.residuals, result.best
    else:
        h = mpmath.mpf(entropy) if entropy is not None else mpmath.mpf(settings.asym_entropy)
        result = fit_expansion(data, h, terms, odd_zero, digits, limit)
    expansion = result.expansion
    rows = expansion_table(expansion, data, limit, digits)
    if out:
        write_csv(out, rows)

    coefficient_text = {f"C{n}": mpmath.nstr(c, 15) for n, c in enumerate(expansion.coeffs)}
    if output_format == 'machine':
        payload = {'h': mpmath.nstr(expansion.h, 15), 'coeffs': coefficient_text,
                   'max_relative_residual': mpmath.nstr(result.max_relative_residual, 6),
                   'samples': result.samples}
        if residuals is not None:
            payload['sweep'] = {h: mpmath.nstr(r, 6) for h, r in residuals.items()}
        emit_machine(payload)
        return
    header("Expansion Fit", f"{result.samples} samples, N={terms}, odd-zero {'on' if odd_zero else 'off'}")
    table = Table(show_header=True, header_style="bold magenta")
    table.add_column("coefficient")
    table.add_column("value", justify="right")
    table.add_row("h", mpmath.nstr(expansion.h, 15))
    for name, value in coefficient_text.items():
        table.add_row(name, value)
    console.print(table)
    console.print(f"[bold]Max relative residual:[/bold] {mpmath.nstr(result.max_relative_residual, 6)}")


@asym.command()
@click.argument('samples', type=click.Path(exists=True, dir_okay=False))
@expansion_options
@format_option
@out_option
@click.pass_context
@handle_errors
def ratio(ctx, samples, entropy, coeffs, odd_zero, output_format, out):
    """Ratios count / (C0 e^(hx) x^(-3/2)); these should tend to 1"""
    settings = ctx.obj['settings']
    expansion = build_expansion(settings, entropy, coeffs, odd_zero)
    data = load_samples(samples)
    report = leading_ratio(expansion, data, settings.asym_overflow_limit, settings.asym_precision_digits)
    rows = [{'x': mpmath.nstr(x, 15), 'ratio': mpmath.nstr(r, 15),
             'bound': mpmath.nstr(ratio_error_bound(expansion, x), 6)}
            for x, r in zip(report.xs, report.ratios)]
    if out:
        write_csv(out, rows)
    if output_format == 'machine':
        emit_machine({'expansion': expansion.describe(), 'conforming': report.conforming, 'rows': rows})
        return
    header("Leading Ratio", expansion.describe())
    table = Table(show_header=True, header_style="bold magenta")
    table.add_column("x", justify="right")
    table.add_column("ratio", justify="right")
    table.add_column("|ratio - 1| bound", justify="right")
    for row in rows:
        table.add_row(row['x'], row['ratio'], row['bound'])
    console.print(table)
    if not report.conforming:
        console.print("[bold red]non-conforming: zero counts in the samples[/bold red]")


if __name__ == "__main__":
    main()
