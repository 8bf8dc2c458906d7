// Mirrors the query API's response bodies (docs/openapi.json).

export interface Span {
  start: number;
  end: number;
}

export interface Sighting {
  platform: string;
  author: string;
  post_id: string;
  comment_id: string | null;
  span: Span;
  seen_at: number;
}

export interface Pii {
  emails: string[];
  links: string[];
  discord_handles: string[];
}

export interface TwitterInfo {
  handle: string;
  display_name: string;
  description: string;
  location: string | null;
  profile_url: string | null;
  avatar_url: string | null;
  post_id: string;
  pii: Pii;
}

export interface ActivitySummary {
  balance_wei: string;
  balance_eth: string;
  status: string;
  transaction_count: number;
}

export interface Profile {
  address: string;
  address_checksummed: string;
  reddit_author: string;
  reddit_sightings: Sighting[];
  twitter: TwitterInfo | null;
  activity: ActivitySummary | null;
}

export interface TransactionRow {
  hash: string;
  from: string;
  to: string | null;
  value_wei: string;
  value_eth: string;
  timestamp: number;
}

export interface TransactionsResponse {
  address: string;
  transactions: TransactionRow[];
}

export interface ProfileSummary {
  address: string;
  address_checksummed: string;
  reddit_author: string;
  twitter_handle: string | null;
  balance_wei: string;
  balance_eth: string;
  status: string | null;
}

export interface TopResponse {
  profiles: ProfileSummary[];
}

export interface RandomResponse {
  seed: number;
  addresses: string[];
}
