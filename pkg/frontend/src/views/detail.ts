import { ApiError, isAbortError, type ApiClient } from '../api';
import { absoluteTime, relativeTime, shortAddress, trimEth } from '../format';
import { addressHash } from '../router';
import type { Profile, TransactionRow, TwitterInfo } from '../types';
import { isAddressShaped } from '../validate';
import { clear, el, externalLink, statusBadge } from './shared';

function notFoundState(message: string): HTMLElement {
  return el('p', { class: 'not-found' }, [message]);
}

function redditSection(profile: Profile): HTMLElement {
  const sightings = el('ul', { class: 'sightings' });
  for (const s of profile.reddit_sightings) {
    sightings.append(el('li', {}, [
      el('span', { class: 'mono' }, [s.comment_id ?? `${s.post_id} (post body)`]),
      ` by ${s.author}, ${relativeTime(s.seen_at)}`,
    ]));
  }
  return el('section', { id: 'reddit-section' }, [
    el('h2', {}, ['Reddit']),
    el('p', {}, ['Posted by ', el('strong', { id: 'reddit-author' }, [profile.reddit_author])]),
    sightings,
  ]);
}

function piiChips(twitter: TwitterInfo): HTMLElement {
  const chips = el('div', { id: 'pii-chips', class: 'chips' });
  for (const email of twitter.pii.emails) {
    chips.append(el('span', { class: 'chip pii pii-email' }, [email]));
  }
  for (const link of twitter.pii.links) {
    const chip = el('span', { class: 'chip pii pii-link' });
    chip.append(link.startsWith('http') ? externalLink(link, link) : link);
    chips.append(chip);
  }
  for (const handle of twitter.pii.discord_handles) {
    chips.append(el('span', { class: 'chip pii pii-discord' }, [handle]));
  }
  if (!chips.firstChild) {
    chips.append(el('span', { class: 'muted' }, ['nothing mined from the description']));
  }
  return chips;
}

function twitterSection(twitter: TwitterInfo | null): HTMLElement {
  const section = el('section', { id: 'twitter-section' }, [el('h2', {}, ['Twitter'])]);
  if (!twitter) {
    section.append(notFoundState('No Twitter match found for this address.'));
    return section;
  }
  const card = el('div', { class: 'twitter-card card' });
  if (twitter.avatar_url) {
    const avatar = el('img', { class: 'avatar', src: twitter.avatar_url, alt: `@${twitter.handle}` });
    card.append(
      twitter.profile_url
        ? (() => { const a = externalLink(twitter.profile_url, ''); a.append(avatar); return a; })()
        : avatar,
    );
  }
  const identity = el('div', { class: 'twitter-identity' }, [
    el('div', { class: 'display-name' }, [twitter.display_name || twitter.handle]),
  ]);
  identity.append(
    twitter.profile_url
      ? externalLink(twitter.profile_url, `@${twitter.handle}`)
      : el('span', {}, [`@${twitter.handle}`]),
  );
  if (twitter.location) {
    identity.append(el('div', { class: 'muted' }, [twitter.location]));
  }
  card.append(identity);
  section.append(card);
  section.append(
    twitter.description
      ? el('blockquote', { id: 'twitter-description' }, [twitter.description])
      : notFoundState('Profile has no description.'),
  );
  section.append(el('h3', {}, ['Mined PII']), piiChips(twitter));
  return section;
}

function counterpartyCell(side: string | null, queried: string): HTMLElement {
  const cell = el('td', { class: 'mono' });
  if (side === null) {
    cell.append(el('span', { class: 'muted' }, ['contract creation']));
  } else if (side === queried) {
    cell.append(el('span', { class: 'self' }, [shortAddress(side)]));
  } else if (isAddressShaped(side)) {
    // pivot: one click issues the next lookup
    cell.append(el('a', { class: 'counterparty', href: addressHash(side), title: side }, [
      shortAddress(side),
    ]));
  } else {
    cell.append(side); // redacted form like "…ab"
  }
  return cell;
}

function transactionsSection(rows: TransactionRow[], queried: string): HTMLElement {
  const section = el('section', { id: 'transactions-section' }, [el('h2', {}, ['Transactions'])]);
  if (rows.length === 0) {
    section.append(notFoundState('No transactions on record.'));
    return section;
  }
  const body = el('tbody');
  for (const row of rows) {
    const tr = el('tr', { class: 'tx-row' });
    tr.append(
      counterpartyCell(row.from, queried),
      counterpartyCell(row.to, queried),
      el('td', { class: 'amount' }, [`${trimEth(row.value_eth)} ETH`]),
      el('td', { title: absoluteTime(row.timestamp) }, [relativeTime(row.timestamp)]),
    );
    body.append(tr);
  }
  section.append(el('table', { class: 'tx-table' }, [
    el('thead', {}, [el('tr', {}, [
      el('th', {}, ['From']), el('th', {}, ['To']),
      el('th', {}, ['Amount']), el('th', {}, ['When']),
    ])]),
    body,
  ]));
  return section;
}

export async function renderDetail(root: HTMLElement, api: ApiClient, address: string): Promise<void> {
  clear(root);
  root.append(el('p', { class: 'loading' }, ['tracing…']));
  let bundle;
  try {
    bundle = await api.lookup(address);
  } catch (error) {
    if (isAbortError(error)) {
      return; // a newer lookup superseded this view
    }
    clear(root);
    root.append(el('a', { href: '#/', class: 'back' }, ['← back']));
    if (error instanceof ApiError && error.status === 404) {
      root.append(el('section', { class: 'error-state', id: 'not-in-dataset' }, [
        el('h1', { class: 'mono' }, [shortAddress(address)]),
        notFoundState('This address is not in the dataset.'),
      ]));
    } else if (error instanceof ApiError) {
      root.append(el('section', { class: 'error-state' }, [notFoundState(error.message)]));
    } else {
      root.append(el('section', { class: 'error-state' }, [
        notFoundState('The query service is unreachable.'),
      ]));
    }
    return;
  }

  const { profile, transactions } = bundle;
  clear(root);
  const activity = profile.activity;
  root.append(
    el('a', { href: '#/', class: 'back' }, ['← back']),
    el('header', { class: 'detail-header' }, [
      el('h1', { class: 'mono', id: 'detail-address' }, [profile.address_checksummed]),
      statusBadge(activity ? activity.status : null),
    ]),
    el('section', { id: 'activity-section' }, [
      activity
        ? el('p', { class: 'balance' }, [
            el('strong', {}, [`${trimEth(activity.balance_eth)} ETH`]),
            ` (${activity.balance_wei} wei, ${activity.transaction_count} transactions)`,
          ])
        : notFoundState('No chain data recorded for this address.'),
    ]),
    redditSection(profile),
    twitterSection(profile.twitter),
    transactionsSection(transactions.transactions, profile.address),
  );
}
