import { ApiClient } from './api';
import { apiBase } from './config';
import { parseRoute } from './router';
import { renderDetail } from './views/detail';
import { renderLanding } from './views/landing';

export function startApp(root: HTMLElement, api: ApiClient = new ApiClient(apiBase())): () => void {
  const render = () => {
    const route = parseRoute(window.location.hash);
    if (route.kind === 'address') {
      void renderDetail(root, api, route.address);
    } else {
      void renderLanding(root, api);
    }
  };
  // delegate in-app links so routing never depends on native anchor handling
  const followLink = (event: Event) => {
    const target = event.target as HTMLElement | null;
    const anchor = target?.closest?.('a');
    const href = anchor?.getAttribute('href');
    if (href && href.startsWith('#/')) {
      event.preventDefault();
      if (window.location.hash === href) {
        render(); // re-render instead of silently ignoring a same-route click
      } else {
        window.location.hash = href;
      }
    }
  };
  root.addEventListener('click', followLink);
  window.addEventListener('hashchange', render);
  render();
  return () => {
    root.removeEventListener('click', followLink);
    window.removeEventListener('hashchange', render);
  };
}

const mount = document.getElementById('app');
if (mount && !('__CHAINTRACE_TEST__' in globalThis)) {
  startApp(mount);
}
