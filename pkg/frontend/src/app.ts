// Bootstrap: fetch the knowledge base, open a session, wire forms to the
// store, and keep the matrices panel in sync with the committed revision.

import { EngineClient } from './api.js'
import { intakeSections, parseCellValue } from './forms.js'
import {
    renderAlphaSlider,
    renderForms,
    renderMatrices,
    renderProminent,
    type FieldHandlers,
} from './render.js'
import { SessionStore } from './state.js'
import type { Finding } from './types.js'

export async function boot(root: HTMLElement, baseUrl = ''): Promise<SessionStore> {
    const client = new EngineClient(baseUrl)
    const overview = await client.kb()
    const kb = overview.kb
    const store = new SessionStore(client)
    await store.start()

    root.textContent = ''
    const header = document.createElement('header')
    const title = document.createElement('h2')
    title.textContent = 'Intake session'
    const status = document.createElement('span')
    status.className = 'status mono'
    const errorBanner = document.createElement('div')
    errorBanner.className = 'error-banner'
    errorBanner.hidden = true
    header.append(title, status, errorBanner)

    const columns = document.createElement('div')
    columns.className = 'columns'
    const formsColumn = document.createElement('div')
    formsColumn.className = 'col forms'
    const matricesColumn = document.createElement('div')
    matricesColumn.className = 'col results'
    columns.append(formsColumn, matricesColumn)
    root.append(header, columns)

    const submit = (finding: Finding) => {
        void store.submit(finding)
    }
    const handlers: FieldHandlers = {
        onToggle: (aspect, value) => submit({ kind: 'direct_history', aspect, value }),
        onRecallChange: (disease, symptoms) =>
            submit({ kind: 'recalled_past_symptoms', disease, symptoms }),
        onProblemFactor: (problem, factor, raw) =>
            submit({ kind: 'problem_factor', problem, factor, value: parseCellValue(raw) }),
        onObservation: (sign, observable, raw) =>
            submit({ kind: 'observation', sign, observable, value: parseCellValue(raw) }),
        onScalarTest: (test, value) => submit({ kind: 'test_result', test, value }),
        onAspectTest: (test, aspects) => submit({ kind: 'test_result', test, aspects }),
    }

    formsColumn.append(renderForms(intakeSections(kb), handlers))

    const previewPanel = document.createElement('section')
    previewPanel.className = 'panel preview'
    previewPanel.hidden = true
    const slider = renderAlphaSlider(store.state.alpha, {
        onPreview: (alpha) => void store.whatIfAlpha(alpha),
        onCommit: (alpha) => void store.commitAlpha(alpha),
    })
    formsColumn.prepend(previewPanel)
    formsColumn.prepend(slider)

    const committed = document.createElement('div')
    matricesColumn.append(committed)

    store.subscribe((state) => {
        status.textContent = `revision ${state.revision} · alpha ${state.alpha.toFixed(2)}${
            state.pending ? ' · pending…' : ''
        }`
        errorBanner.hidden = state.error === null
        errorBanner.textContent = state.error ?? ''
        committed.textContent = ''
        committed.append(renderMatrices(kb, state.matrices))
        if (state.preview) {
            previewPanel.hidden = false
            previewPanel.textContent = ''
            const heading = document.createElement('h3')
            heading.textContent = `Prominent sets at alpha ${state.preview.alpha.toFixed(2)} (preview, not committed)`
            previewPanel.append(heading, renderProminent(state.preview.prominent))
        } else {
            previewPanel.hidden = true
        }
        root.querySelectorAll('.panel').forEach((panel) =>
            panel.classList.remove('pending', 'invalid'),
        )
        if (state.pending) {
            const key = pendingPanelKey(state.pending)
            if (key) {
                root.querySelector(`[data-panel="${key}"]`)?.classList.add('pending')
            }
        }
        if (state.errorFinding) {
            const key = pendingPanelKey(state.errorFinding)
            if (key) {
                root.querySelector(`[data-panel="${key}"]`)?.classList.add('invalid')
            }
        }
    })
    await store.refresh()
    return store
}

function pendingPanelKey(finding: Finding): string | null {
    switch (finding.kind) {
        case 'direct_history':
            return 'history:history'
        case 'recalled_past_symptoms':
            return `recall:${finding.disease}`
        case 'problem_report':
        case 'problem_factor':
            return `problem:${finding.problem}`
        case 'observation':
            return `sign:${finding.sign}`
        case 'test_result':
            return `test:${finding.test}`
        case 'alpha_override':
            return null
    }
}

declare global {
    interface Window {
        fuzzytriageBoot?: typeof boot
    }
}

if (typeof window !== 'undefined' && typeof document !== 'undefined') {
    window.fuzzytriageBoot = boot
    const mount = document.getElementById('app')
    if (mount) {
        boot(mount).catch((err) => {
            mount.innerHTML = ''
            const panel = document.createElement('div')
            panel.className = 'error-banner blocking'
            panel.textContent = `Cannot reach the engine: ${err instanceof Error ? err.message : err}`
            const retry = document.createElement('button')
            retry.textContent = 'Retry'
            retry.addEventListener('click', () => window.location.reload())
            panel.append(document.createElement('br'), retry)
            mount.append(panel)
        })
    }
}
