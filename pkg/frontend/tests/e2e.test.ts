// End-to-end: a real corpus is generated and run through the real
// pipeline CLI, the real query service is spawned over the committed
// store, and the app is driven in jsdom against it over live HTTP.

import { execFileSync, spawn, type ChildProcess } from 'node:child_process';
import { mkdtempSync, readFileSync, rmSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api';
import { startApp } from '../src/main';

const PYTHON = process.env.CHAINTRACE_PYTHON ?? 'python3';

interface ManifestRecord {
  address: string;
  reddit_author: string;
  twitter: null | {
    handle: string;
    pii: { emails: string[]; links: string[]; discord_handles: string[] };
    description: string;
  };
  transactions: Array<{ from: string; to: string | null }>;
  status: string;
}

let workDir: string;
let server: ChildProcess | null = null;
let base: string;
let records: ManifestRecord[];
let stopApp: (() => void) | null = null;
let root: HTMLElement;

async function waitFor<T>(probe: () => T | null | undefined | false, what: string, timeoutMs = 15_000): Promise<T> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    const value = probe();
    if (value) {
      return value;
    }
    if (Date.now() > deadline) {
      throw new Error(`timed out waiting for ${what}`);
    }
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
}

async function serviceReady(url: string): Promise<void> {
  const deadline = Date.now() + 30_000;
  for (;;) {
    try {
      const response = await fetch(`${url}/api/top?n=1`);
      if (response.ok) {
        return;
      }
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) {
      throw new Error('query service did not come up');
    }
    await new Promise((resolve) => setTimeout(resolve, 100));
  }
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), 'chaintrace-e2e-'));
  execFileSync(PYTHON, ['-m', 'chaintrace.cli', 'gen-corpus', '--seed', '21',
    '--out', join(workDir, 'corpus'), '--addresses', '40']);
  execFileSync(PYTHON, ['-m', 'chaintrace.cli', 'run-all',
    '--fixtures', join(workDir, 'corpus'), '--out', join(workDir, 'run')]);
  const manifest = JSON.parse(readFileSync(join(workDir, 'corpus', 'manifest.json'), 'utf-8'));
  records = manifest.records as ManifestRecord[];

  const port = 8100 + Math.floor(Math.random() * 800);
  base = `http://127.0.0.1:${port}`;
  server = spawn(PYTHON, ['-m', 'chaintrace.cli', 'serve',
    '--store', join(workDir, 'run', 'records.jsonl'),
    '--port', String(port)], { stdio: 'ignore' });
  await serviceReady(base);

  globalThis.__CHAINTRACE_API_BASE__ = base;
  root = document.createElement('div');
  root.id = 'app';
  document.body.append(root);
  window.location.hash = '#/';
  stopApp = startApp(root, new ApiClient(base));
});

afterAll(() => {
  stopApp?.();
  server?.kill('SIGTERM');
  rmSync(workDir, { recursive: true, force: true });
});

function richRecord(): ManifestRecord {
  const record = records.find(
    (r) => r.twitter
      && (r.twitter.pii.emails.length + r.twitter.pii.links.length
          + r.twitter.pii.discord_handles.length) > 0
      && r.transactions.length > 0,
  );
  if (!record) {
    throw new Error('corpus seed lacks a fully-populated record; adjust the seed');
  }
  return record;
}

describe('investigator UI against the seeded service', () => {
  it('landing shows live suggestions and top profiles', async () => {
    window.location.hash = '#/';
    await waitFor(() => root.querySelector('#suggestions .suggestion'), 'suggestions');
    await waitFor(() => root.querySelectorAll('.top-card').length === 3, 'three top cards');
  });

  it('searching a manifest address shows its linked identity', async () => {
    const record = richRecord();
    window.location.hash = '#/';
    const input = await waitFor(
      () => root.querySelector<HTMLInputElement>('#search-input'), 'search input');
    input.value = record.address;
    root.querySelector('#search-form')!.dispatchEvent(
      new Event('submit', { bubbles: true, cancelable: true }));
    await waitFor(() => window.location.hash.includes(record.address), 'route change');

    const author = await waitFor(
      () => root.querySelector('#reddit-author'), 'detail render');
    expect(author.textContent).toBe(record.reddit_author);

    const twitter = record.twitter!;
    const expectedChips = twitter.pii.emails.length + twitter.pii.links.length
      + twitter.pii.discord_handles.length;
    expect(root.querySelectorAll('#pii-chips .pii')).toHaveLength(expectedChips);
    for (const email of twitter.pii.emails) {
      expect(root.querySelector('#pii-chips')!.textContent).toContain(email);
    }
    expect(root.querySelectorAll('.tx-row')).toHaveLength(record.transactions.length);
  });

  it('clicking a counterparty pivots to its profile', async () => {
    const inStore = new Set(records.map((r) => r.address));
    const source = records.find((r) =>
      r.transactions.some((tx) => {
        const other = tx.from === r.address ? tx.to : tx.from;
        return other !== null && inStore.has(other) && other !== r.address;
      }));
    expect(source, 'corpus should wire at least one in-store counterparty').toBeDefined();
    const tx = source!.transactions.find((t) => {
      const other = t.from === source!.address ? t.to : t.from;
      return other !== null && inStore.has(other) && other !== source!.address;
    })!;
    const counterparty = (tx.from === source!.address ? tx.to : tx.from)!;

    window.location.hash = `#/address/${source!.address}`;
    await waitFor(
      () => root.querySelector('#detail-address')?.textContent?.toLowerCase()
        === source!.address, 'source detail');
    const pivot = await waitFor(
      () => [...root.querySelectorAll<HTMLAnchorElement>('a.counterparty')]
        .find((a) => a.getAttribute('href') === `#/address/${counterparty}`),
      'counterparty link');
    pivot.click();
    expect(window.location.hash).toBe(`#/address/${counterparty}`);
    await waitFor(
      () => root.querySelector('#detail-address')?.textContent?.toLowerCase()
        === counterparty, 'counterparty detail');
    const expected = records.find((r) => r.address === counterparty)!;
    expect(root.querySelector('#reddit-author')!.textContent).toBe(expected.reddit_author);
  });

  it('an unknown but well-formed address renders the not-in-dataset state', async () => {
    window.location.hash = `#/address/0x${'9'.repeat(40)}`;
    await waitFor(() => root.querySelector('#not-in-dataset'), 'not-found state');
  });

  it('malformed input is blocked before any request', async () => {
    window.location.hash = '#/';
    const input = await waitFor(
      () => root.querySelector<HTMLInputElement>('#search-input'), 'search input');

    const realFetch = globalThis.fetch;
    let requests = 0;
    globalThis.fetch = ((...args: Parameters<typeof fetch>) => {
      requests += 1;
      return realFetch(...args);
    }) as typeof fetch;
    try {
      input.value = '0xdeadbeef';
      root.querySelector('#search-form')!.dispatchEvent(
        new Event('submit', { bubbles: true, cancelable: true }));
      await new Promise((resolve) => setTimeout(resolve, 200));
      expect(requests).toBe(0);
      const error = root.querySelector('#search-error')!;
      expect(error.hasAttribute('hidden')).toBe(false);
      expect(window.location.hash).toBe('#/');
    } finally {
      globalThis.fetch = realFetch;
    }
  });
});
