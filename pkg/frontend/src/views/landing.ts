import type { ApiClient } from '../api';
import { SUGGESTION_COUNT, TOP_COUNT } from '../config';
import { shortAddress, trimEth } from '../format';
import { addressHash, navigateToAddress } from '../router';
import { normalizeInput, validateAddressInput } from '../validate';
import { clear, el, statusBadge } from './shared';

export function renderSearchForm(): HTMLElement {
  const input = el('input', {
    type: 'text',
    id: 'search-input',
    placeholder: '0x… paste an Ethereum address',
    autocomplete: 'off',
    spellcheck: 'false',
  });
  const error = el('p', { id: 'search-error', class: 'inline-error', hidden: '' });
  const form = el('form', { id: 'search-form', class: 'search' }, [
    input,
    el('button', { type: 'submit' }, ['Trace']),
    error,
  ]);
  form.addEventListener('submit', (event) => {
    event.preventDefault();
    const value = normalizeInput(input.value);
    const problem = validateAddressInput(value);
    if (problem) {
      error.textContent = problem;
      error.removeAttribute('hidden');
      return; // malformed input never reaches the network
    }
    error.setAttribute('hidden', '');
    navigateToAddress(value.toLowerCase());
  });
  return form;
}

function addressChip(address: string): HTMLElement {
  const chip = el('a', { class: 'chip suggestion', href: addressHash(address) }, [
    shortAddress(address),
  ]);
  chip.setAttribute('title', address);
  return chip;
}

export async function renderLanding(root: HTMLElement, api: ApiClient): Promise<void> {
  clear(root);
  const suggestions = el('div', { id: 'suggestions', class: 'chips' });
  const topSection = el('section', { id: 'top-profiles' });
  root.append(
    el('section', { class: 'hero' }, [
      el('h1', {}, ['chaintrace']),
      el('p', { class: 'tagline' }, [
        'Who is behind an Ethereum address? Search one, or poke at an example:',
      ]),
      renderSearchForm(),
      suggestions,
    ]),
    topSection,
  );

  try {
    const random = await api.random(SUGGESTION_COUNT);
    for (const address of random.addresses) {
      suggestions.append(addressChip(address));
    }
  } catch {
    suggestions.append(el('span', { class: 'muted' }, ['suggestions unavailable']));
  }

  try {
    const top = await api.top(TOP_COUNT);
    if (top.profiles.length === 0) {
      topSection.append(el('p', { class: 'muted', id: 'top-empty' }, [
        'No records loaded yet. Run the pipeline, then restart the service.',
      ]));
      return;
    }
    topSection.append(el('h2', {}, ['Richest traced profiles']));
    const grid = el('div', { class: 'card-grid' });
    for (const profile of top.profiles) {
      const card = el('a', { class: 'card top-card', href: addressHash(profile.address) }, [
        el('div', { class: 'card-address mono' }, [shortAddress(profile.address_checksummed)]),
        el('div', { class: 'card-balance' }, [`${trimEth(profile.balance_eth)} ETH`]),
        el('div', { class: 'card-line' }, [`reddit: ${profile.reddit_author}`]),
        el('div', { class: 'card-line' }, [
          profile.twitter_handle ? `twitter: @${profile.twitter_handle}` : 'no Twitter match',
        ]),
        statusBadge(profile.status),
      ]);
      grid.append(card);
    }
    topSection.append(grid);
  } catch {
    topSection.append(el('p', { class: 'muted' }, ['top profiles unavailable']));
  }
}
