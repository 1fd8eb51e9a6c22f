# -*-coding:Utf-8 -*

"""
Ce module contient la boucle d'inférence fermée.

- les classes ``Unite``, ``TravailleurGroupe``
- les fonctions ``executer_boucle_fermee()``, ``executer_en_ligne()``, ``executer_reglage_pur()``, ``executer()``
- la fonction ``traiter_unite()``, ``executer_unites()``
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple
import logging
import threading
import time
import numpy as np
from lib.configuration import ConfigurationExecution
from lib.donnees import JeuDonnees
from lib.erreurs import ErreurDimension, ErreurGroupe
from lib.messagerie import Messagerie
from lib.modele import Instantane, ModeleEnCouches, capturer_profond, restaurer_profond
from lib.numerique import Tableau, deriver_graine
from lib.rapport import RapportTransitions
from lib.regroupement import kmeans_softmax
from lib.selection import GenreScore, Prediction, partager_par_confiance, predire, seuil_quantile
from lib.tache import construire_tache_auxiliaire, entrainer_auxiliaire

journal = logging.getLogger(__name__)

# Alias de types
Resultat = Tuple[Dict[int, int], str]


class Unite:
    """
    Unité de travail : un groupe (mode ``cluster``), un échantillon (mode ``online``) ou tous les échantillons peu
    confiants (mode ``pft``).

    :param indice: rang de l'unité, qui détermine ses sous-graines.
    :param membres: identifiants des échantillons de test reprédits.
    :param centre: vecteur softmax dont sont tirées les ``K`` classes.
    """

    def __init__(self, indice: int, membres: List[int], centre: Tableau) -> None:
        self.indice = indice
        self.membres = membres
        self.centre = centre


def traiter_unite(modele: ModeleEnCouches, instantane: Instantane, unite: Unite, entrainement: JeuDonnees,
                  test: JeuDonnees, configuration: ConfigurationExecution, k: int) -> Resultat:
    """
    Restaure l'instantané, construit la tâche auxiliaire de l'unité, entraîne le modèle puis reprédit les membres.

    :param modele: modèle (ou copie) à entraîner, restauré avant l'entraînement.
    :param instantane: paramètres initiaux ``Θ_d^0``.
    :param unite: unité traitée.
    :param entrainement: jeu d'entraînement complet.
    :param test: jeu de test.
    :param configuration: configuration de l'exécution.
    :param k: nombre de classes de la tâche auxiliaire.
    :return: ``({identifiant: top-1 final}, empreinte au départ de l'entraînement)``.
    """

    restaurer_profond(modele, instantane)
    empreinte_depart = modele.empreinte(instantane.debut)
    tache = construire_tache_auxiliaire(entrainement.etiquettes, unite.centre, k, configuration.proportion,
                                        deriver_graine(configuration.graine, "tache", unite.indice), configuration)
    entrainer_auxiliaire(modele, entrainement, tache, deriver_graine(configuration.graine, "entrainement", unite.indice))
    _, logits = modele.propager(test.caracteristiques[unite.membres])
    if configuration.restreindre_top_k:
        classes = np.asarray(tache.classes)
        finales = classes[np.argmax(logits[:, classes], axis=1)]
    else:
        finales = np.argmax(logits, axis=1)
    return {membre: int(finale) for membre, finale in zip(unite.membres, finales)}, empreinte_depart


class TravailleurGroupe(threading.Thread):
    """
    Thread qui traite des unités sur sa propre copie du modèle.
    Les indices d'unités sont lus dans ``file_taches`` (``None`` arrête le Thread) et les résultats sont transmis au
    *Main Thread* par ``messagerie`` sous la forme ``(emetteur, categorie, message)`` :

    - ``("resultat", (indice, resultat))``
    - ``("erreur", (indice, exception))``

    :param nom: nom du Thread.
    :param modele: copie du modèle propre au Thread.
    :param file_taches: messagerie des indices d'unités.
    :param messagerie: messagerie des résultats.
    :param contexte: arguments communs de ``traiter_unite()``.
    """

    def __init__(self, nom: str, modele: ModeleEnCouches, file_taches: Messagerie, messagerie: Messagerie,
                 contexte: Dict[str, Any]) -> None:
        super().__init__(name=nom, daemon=True)
        self.modele = modele
        self.file_taches = file_taches
        self.messagerie = messagerie
        self.contexte = contexte

    def run(self) -> None:
        """
        Traite les unités jusqu'à recevoir ``None``.
        """

        unites: Dict[int, Unite] = self.contexte["unites"]
        while True:
            indice = self.file_taches.obtenir()
            if indice is None:
                break
            try:
                resultat = traiter_unite(self.modele, self.contexte["instantane"], unites[indice],
                                         self.contexte["entrainement"], self.contexte["test"],
                                         self.contexte["configuration"], self.contexte["k"])
            except Exception as erreur:
                self.messagerie.ajouter((self.name, "erreur", (indice, erreur)))
            else:
                self.messagerie.ajouter((self.name, "resultat", (indice, resultat)))


def executer_unites(modele: ModeleEnCouches, instantane: Instantane, unites: Sequence[Unite], entrainement: JeuDonnees,
                    test: JeuDonnees, configuration: ConfigurationExecution, k: int,
                    taches: int = 1) -> List[Resultat]:
    """
    Traite les unités dans l'ordre de leur indice, ou en parallèle sur ``taches`` copies du modèle. Chaque unité part de
    l'instantané avec ses propres sous-graines : les résultats ne dépendent pas de ``taches``.

    :return: résultats dans l'ordre des unités.
    :raises ErreurGroupe: si une unité échoue, avec le diagnostic partiel.
    """

    resultats: Dict[int, Resultat] = {}
    if taches <= 1 or len(unites) <= 1:
        for unite in unites:
            try:
                resultats[unite.indice] = traiter_unite(modele, instantane, unite, entrainement, test, configuration, k)
            except Exception as echec:
                raise ErreurGroupe("Échec de l'unité {0} : {1}".format(unite.indice, echec),
                                   {"unite": unite.indice, "terminees": len(resultats), "total": len(unites)}) from echec
            journal.debug("Unité %d/%d traitée", unite.indice + 1, len(unites))
        return [resultats[unite.indice] for unite in unites]

    file_taches = Messagerie()
    messagerie = Messagerie()
    contexte = {"unites": {unite.indice: unite for unite in unites}, "instantane": instantane,
                "entrainement": entrainement, "test": test, "configuration": configuration, "k": k}
    travailleurs = [TravailleurGroupe("Travailleur-{0}".format(numero + 1), modele.copier(), file_taches, messagerie,
                                      contexte) for numero in range(min(taches, len(unites)))]
    for unite in unites:
        file_taches.ajouter(unite.indice)
    for travailleur in travailleurs:
        file_taches.ajouter(None)
        travailleur.start()

    erreur: Optional[Tuple[int, BaseException]] = None
    for _ in range(len(unites)):
        emetteur, categorie, message = messagerie.obtenir()
        if categorie == "erreur":
            erreur = message
            file_taches.effacer()
            for _travailleur in travailleurs:
                file_taches.ajouter(None)
            break
        indice, resultat = message
        resultats[indice] = resultat
        journal.debug("%s a traité l'unité %d", emetteur, indice)
    for travailleur in travailleurs:
        travailleur.join()
    if erreur is not None:
        indice, exception = erreur
        raise ErreurGroupe("Échec de l'unité {0} : {1}".format(indice, exception),
                           {"unite": indice, "terminees": len(resultats), "total": len(unites)}) from exception
    return [resultats[unite.indice] for unite in unites]


def _verifier_compatibilite(modele: ModeleEnCouches, entrainement: JeuDonnees, test: JeuDonnees) -> None:
    """
    :raises ErreurDimension: si le modèle et les jeux n'ont pas la même dimension ou le même nombre de classes.
    """

    for nom, jeu in (("d'entraînement", entrainement), ("de test", test)):
        if jeu.dimension != modele.dimension_entree or jeu.nombre_classes != modele.nombre_classes:
            raise ErreurDimension("Le jeu {0} (d={1}, C={2}) ne correspond pas au modèle (d={3}, C={4})".format(
                nom, jeu.dimension, jeu.nombre_classes, modele.dimension_entree, modele.nombre_classes))


def _construire_unites(mode: str, predictions: List[Prediction], bas: List[int],
                       configuration: ConfigurationExecution) -> List[Unite]:
    """
    :return: unités de travail du mode demandé, par indice croissant.
    """

    if not bas:
        return []
    probabilites = np.array([predictions[identifiant].probabilites for identifiant in bas])
    if mode == "online":
        return [Unite(rang, [identifiant], probabilites[rang]) for rang, identifiant in enumerate(bas)]
    if mode == "pft":
        return [Unite(0, list(bas), probabilites.mean(axis=0))]
    ensemble = kmeans_softmax(probabilites, min(configuration.groupes, len(bas)),
                              deriver_graine(configuration.graine, "kmeans"), configuration.iterations_kmeans, bas,
                              configuration.k)
    return [Unite(indice, groupe.membres, groupe.centre) for indice, groupe in enumerate(ensemble.groupes)]


def executer(modele: ModeleEnCouches, entrainement: JeuDonnees, test: JeuDonnees,
             configuration: ConfigurationExecution, taches: int = 1) -> RapportTransitions:
    """
    Exécute la boucle fermée selon ``configuration.mode`` :

    1. prédiction initiale de tous les échantillons et score de confiance ;
    2. séparation par le seuil (``ε`` pour ``softmax_max``, quantile ``ε`` des échantillons gardés confiants sinon) ;
    3. pour chaque unité : restauration de ``Θ_d^0``, tâche auxiliaire, entraînement, reprédiction des membres ;
    4. restauration finale : le modèle ressort inchangé.

    Les échantillons confiants gardent leur prédiction initiale.

    :param modele: modèle entraîné, inchangé au retour.
    :param entrainement: jeu d'entraînement.
    :param test: jeu de test, les identifiants sont les indices des lignes.
    :param configuration: configuration de l'exécution.
    :param taches: nombre de Threads de travail.
    :return: rapport des transitions.
    :raises ErreurDimension: si les jeux ne correspondent pas au modèle.
    :raises ErreurGroupe: si une unité échoue.
    """

    depart = time.perf_counter()
    configuration.valider()
    _verifier_compatibilite(modele, entrainement, test)
    genre = GenreScore.depuis(configuration.score)
    predictions = predire(modele, test.caracteristiques, None, genre, max(5, configuration.k),
                          configuration.temperature_energie)
    initiales = [prediction.top1 for prediction in predictions]
    if genre is GenreScore.softmax_max:
        seuil = configuration.epsilon
    else:
        seuil = seuil_quantile([prediction.confiance for prediction in predictions], configuration.epsilon)
    partage = partager_par_confiance(predictions, seuil)
    bas = sorted(partage.bas)
    journal.info("%d échantillons peu confiants sur %d (seuil %.4f)", len(bas), len(test), seuil)

    k = modele.nombre_classes if configuration.mode == "pft" else configuration.k
    unites = _construire_unites(configuration.mode, predictions, bas, configuration)
    debut = min(modele.separation, modele.debut_suffixe(configuration.suffixe))
    instantane = capturer_profond(modele, debut)
    try:
        resultats = executer_unites(modele, instantane, unites, entrainement, test, configuration, k, taches)
    finally:
        restaurer_profond(modele, instantane)

    finales = list(initiales)
    for reprises, _ in resultats:
        for identifiant, finale in reprises.items():
            finales[identifiant] = finale
    top5 = float(np.mean([etiquette in prediction.top_k[:5]
                          for prediction, etiquette in zip(predictions, test.etiquettes)])) if len(test) else 0.0
    extras = {
        "mode": configuration.mode,
        "threshold": seuil,
        "low_confidence": len(bas),
        "units": len(unites),
        "baseline_top5_acc": top5,
        "initial_digest": instantane.empreinte,
        "unit_start_digests": [empreinte for _, empreinte in resultats],
    }
    return RapportTransitions.construire(range(len(test)), test.etiquettes, initiales, finales,
                                         [identifiant in partage.hauts for identifiant in range(len(test))],
                                         time.perf_counter() - depart, configuration.vers_dict(), extras)


def executer_boucle_fermee(modele: ModeleEnCouches, entrainement: JeuDonnees, test: JeuDonnees,
                           configuration: ConfigurationExecution, taches: int = 1) -> RapportTransitions:
    """
    Boucle fermée par groupes : K-means sur les sorties softmax des échantillons peu confiants, ``min(Q, |D_low|)``
    groupes, une tâche auxiliaire par centre de groupe.
    """

    return executer(modele, entrainement, test, configuration.modifier(mode="cluster"), taches)


def executer_en_ligne(modele: ModeleEnCouches, entrainement: JeuDonnees, test: JeuDonnees,
                      configuration: ConfigurationExecution, taches: int = 1) -> RapportTransitions:
    """
    Variante en ligne : chaque échantillon peu confiant reçoit sa propre tâche auxiliaire, tirée de sa prédiction.
    """

    return executer(modele, entrainement, test, configuration.modifier(mode="online"), taches)


def executer_reglage_pur(modele: ModeleEnCouches, entrainement: JeuDonnees, test: JeuDonnees,
                         configuration: ConfigurationExecution, taches: int = 1) -> RapportTransitions:
    """
    Comparaison par réglage fin pur : un seul entraînement sur le jeu d'entraînement complet (``K = C``), puis
    reprédiction de tous les échantillons peu confiants.
    """

    return executer(modele, entrainement, test, configuration.modifier(mode="pft"), taches)
