# -*-coding:Utf-8 -*

"""
Ce module contient les commandes de la ligne de commande.

- les validateurs ``validateur_epsilon()``, ``validateur_entier_positif()``, ``validateur_entier_positif_ou_nul()``,
  ``validateur_reel_positif()``, ``validateur_proportion()``, ``validateur_liste_entiers()``
- les commandes ``commande_generer()``, ``commande_entrainer()``, ``commande_executer()``, ``commande_balayer()``,
  ``commande_analyser_scores()``
- la fonction ``main()``
"""

from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Final
from dataclasses import fields
import argparse
import csv
import logging
import os
from lib.boucle import executer, executer_boucle_fermee, executer_en_ligne
from lib.configuration import ConfigurationExecution, epsilon_corrompu, fusionner, graine_par_defaut, \
    lire_fichier_configuration, modes_connus, scores_connus
from lib.donnees import JeuDonnees, SpecGenerateur, corrompre, ecrire_binaire, ecrire_csv, generer_finegrained, lire_jeu
from lib.dossier import Dossier
from lib.entrainement import SpecModele, entrainer_base, entrainer_jusqu_a, paliers_epoques, perte_moyenne, \
    precision_top_k
from lib.erreurs import ErreurConfiguration, ExceptionBoucle
from lib.fichier_donnees import FichierDonnees
from lib.modele import ModeleEnCouches, charger_modele, enregistrer_modele
from lib.rapport import RapportTransitions
from lib.selection import GenreScore, courbe_f1t5, ecrire_courbe_f1t5, predire

journal = logging.getLogger(__name__)

# Alias de types
Contexte = Tuple[ModeleEnCouches, JeuDonnees, JeuDonnees]

# Axes de balayage et paramètre de la configuration modifié par chacun
axes_balayage: Final[Dict[str, str]] = {
    "epsilon": "epsilon", "clusters": "groupes", "topk": "k", "epochs": "epoques", "proportion": "proportion",
    "score": "score", "lambda": "lam", "suffix": "suffixe", "severity": "chemin_test",
}

# Sous-dossier des jeux de test corrompus écrits par ``gen-data``
dossier_corrompus: Final[str] = "corrompus"


def validateur_epsilon(saisie: str) -> float:
    """
    Valide le seuil de confiance :

    - Convertit la saisie en nombre réel
    - Vérifie qu'il est strictement positif et inférieur ou égal à 1.

    :param saisie: saisie passée en paramètre à l'appel du programme.
    :return: le seuil validé.
    :raises ArgumentTypeError: si la saisie n'est pas un nombre compris dans (0, 1].
    """

    message_erreur = "Le seuil est un nombre strictement positif et inférieur ou égal à 1."
    try:
        epsilon = float(saisie)
    except ValueError:
        raise argparse.ArgumentTypeError(message_erreur)
    else:
        if not 0 < epsilon <= 1:
            raise argparse.ArgumentTypeError(message_erreur)
        return epsilon


def validateur_entier_positif(saisie: str) -> int:
    """
    :param saisie: saisie passée en paramètre à l'appel du programme.
    :return: l'entier validé.
    :raises ArgumentTypeError: si la saisie n'est pas un entier supérieur ou égal à 1.
    """

    message_erreur = "La valeur est un nombre entier supérieur ou égal à 1."
    try:
        entier = int(saisie)
    except ValueError:
        raise argparse.ArgumentTypeError(message_erreur)
    else:
        if entier < 1:
            raise argparse.ArgumentTypeError(message_erreur)
        return entier


def validateur_entier_positif_ou_nul(saisie: str) -> int:
    """
    :param saisie: saisie passée en paramètre à l'appel du programme.
    :return: l'entier validé.
    :raises ArgumentTypeError: si la saisie n'est pas un entier positif ou nul.
    """

    message_erreur = "La valeur est un nombre entier positif ou nul."
    try:
        entier = int(saisie)
    except ValueError:
        raise argparse.ArgumentTypeError(message_erreur)
    else:
        if entier < 0:
            raise argparse.ArgumentTypeError(message_erreur)
        return entier


def validateur_reel_positif(saisie: str) -> float:
    """
    :param saisie: saisie passée en paramètre à l'appel du programme.
    :return: le réel validé.
    :raises ArgumentTypeError: si la saisie n'est pas un nombre positif ou nul.
    """

    message_erreur = "La valeur est un nombre positif ou nul."
    try:
        reel = float(saisie)
    except ValueError:
        raise argparse.ArgumentTypeError(message_erreur)
    else:
        if not reel >= 0:
            raise argparse.ArgumentTypeError(message_erreur)
        return reel


def validateur_proportion(saisie: str) -> float:
    """
    :param saisie: saisie passée en paramètre à l'appel du programme.
    :return: la proportion validée.
    :raises ArgumentTypeError: si la saisie n'est pas un nombre compris dans (0, 1].
    """

    message_erreur = "La proportion est un nombre strictement positif et inférieur ou égal à 1."
    try:
        proportion = float(saisie)
    except ValueError:
        raise argparse.ArgumentTypeError(message_erreur)
    else:
        if not 0 < proportion <= 1:
            raise argparse.ArgumentTypeError(message_erreur)
        return proportion


def validateur_suffixe(saisie: str) -> int:
    """
    :param saisie: nombre de couches finales entraînables, ou ``all``.
    :return: l'entier validé, ``0`` pour toutes les couches.
    :raises ArgumentTypeError: si la saisie n'est ni ``all`` ni un entier supérieur ou égal à 1.
    """

    if saisie.strip().lower() in ("all", "tout"):
        return 0
    return validateur_entier_positif(saisie)


def validateur_liste_entiers(saisie: str) -> List[int]:
    """
    :param saisie: entiers séparés par des virgules, par exemple ``64,64``.
    :return: la liste validée, éventuellement vide.
    :raises ArgumentTypeError: si un élément n'est pas un entier supérieur ou égal à 1.
    """

    return [validateur_entier_positif(partie) for partie in saisie.split(",") if partie.strip()]


def _ajouter_options_execution(parser: argparse.ArgumentParser) -> None:
    """
    Options communes à ``run`` et ``sweep``. Les valeurs par défaut sont à ``None`` : une option absente laisse la
    place au fichier de configuration puis aux valeurs par défaut de ``ConfigurationExecution``.
    """

    parser.add_argument("--config", type=str, default=None, help="Fichier de configuration 'cle = valeur'.")
    parser.add_argument("--model", dest="chemin_modele", type=str, default=None, help="Modèle entraîné.")
    parser.add_argument("--train", dest="chemin_entrainement", type=str, default=None, help="Jeu d'entraînement.")
    parser.add_argument("--test", dest="chemin_test", type=str, default=None, help="Jeu de test.")
    parser.add_argument("--out-dir", dest="dossier_sortie", type=str, default=None, help="Dossier des rapports.")
    parser.add_argument("--epsilon", type=validateur_epsilon, default=None, help="Seuil de confiance ε.")
    parser.add_argument("--clusters", dest="groupes", type=validateur_entier_positif, default=None,
                        help="Nombre de groupes Q.")
    parser.add_argument("--topk", dest="k", type=validateur_entier_positif, default=None,
                        help="Nombre de classes K de la tâche auxiliaire.")
    parser.add_argument("--lambda", dest="lam", type=validateur_reel_positif, default=None,
                        help="Poids λ de la perte contrastive.")
    parser.add_argument("--tau", type=validateur_reel_positif, default=None, help="Température τ.")
    parser.add_argument("--epochs", dest="epoques", type=validateur_entier_positif_ou_nul, default=None,
                        help="Époques d'entraînement auxiliaire.")
    parser.add_argument("--batch-size", dest="taille_lot", type=validateur_entier_positif, default=None,
                        help="Taille des lots auxiliaires.")
    parser.add_argument("--lr", dest="lr_base", type=validateur_reel_positif, default=None,
                        help="Taux d'apprentissage initial.")
    parser.add_argument("--momentum", dest="moment", type=validateur_reel_positif, default=None, help="Moment du SGD.")
    parser.add_argument("--weight-decay", dest="decroissance", type=validateur_reel_positif, default=None,
                        help="Pénalité L2.")
    parser.add_argument("--proportion", type=validateur_proportion, default=None,
                        help="Proportion du jeu auxiliaire conservée.")
    parser.add_argument("--trainable-suffix", dest="suffixe", type=validateur_suffixe, default=None,
                        help="Nombre de couches finales entraînées, 'all' pour toutes.")
    parser.add_argument("--score", type=str, choices=scores_connus, default=None, help="Score de confiance.")
    parser.add_argument("--mode", type=str, choices=modes_connus, default=None, help="Mode de la boucle.")
    parser.add_argument("--seed", dest="graine", type=int, default=None, help="Graine de l'exécution.")
    parser.add_argument("--jitter", dest="bruit_augmentation", type=validateur_reel_positif, default=None,
                        help="Écart type du bruit ajouté aux entrées auxiliaires.")
    parser.add_argument("--restrict-topk", dest="restreindre_top_k", action="store_const", const=True, default=None,
                        help="Restreint la prédiction finale aux K classes de la tâche.")
    parser.add_argument("--jobs", type=validateur_entier_positif, default=1, help="Nombre de Threads de travail.")


def _configuration(arguments: argparse.Namespace,
                   defauts: Optional[ConfigurationExecution] = None) -> ConfigurationExecution:
    """
    Résout la configuration : options > fichier ``--config`` > ``defauts``.
    ``--trainable-suffix all`` (lu comme 0) est appliqué après la fusion pour l'emporter aussi sur un suffixe du fichier.
    """

    fichier = lire_fichier_configuration(arguments.config) if arguments.config else None
    drapeaux = {champ.name: getattr(arguments, champ.name) for champ in fields(ConfigurationExecution)
                if hasattr(arguments, champ.name)}
    tout_entrainer = drapeaux.get("suffixe") == 0
    if tout_entrainer:
        del drapeaux["suffixe"]
    configuration = fusionner(fichier, drapeaux, defauts)
    return configuration.modifier(suffixe=None) if tout_entrainer else configuration


def _dossier_sortie(configuration: ConfigurationExecution) -> str:
    dossier = configuration.dossier_sortie or "."
    os.makedirs(dossier, exist_ok=True)
    return dossier


def _charger_contexte(configuration: ConfigurationExecution) -> Contexte:
    """
    :return: ``(modele, entrainement, test)`` désignés par la configuration.
    :raises ErreurConfiguration: si un chemin manque.
    """

    for chemin, option in ((configuration.chemin_modele, "--model"), (configuration.chemin_entrainement, "--train"),
                           (configuration.chemin_test, "--test")):
        if not chemin:
            raise ErreurConfiguration("L'option {0} est obligatoire".format(option))
    return (charger_modele(str(configuration.chemin_modele)), lire_jeu(str(configuration.chemin_entrainement)),
            lire_jeu(str(configuration.chemin_test)))


def commande_generer(arguments: argparse.Namespace) -> int:
    """
    Génère le banc d'essai, écrit les jeux d'entraînement et de test puis un jeu de test corrompu par sévérité demandée.
    Affiche le chemin des fichiers écrits.
    """

    spec = SpecGenerateur(arguments.superclasses, arguments.subclasses, arguments.dim, arguments.intra,
                          arguments.inter, arguments.train_per_class, arguments.test_per_class, arguments.noise,
                          arguments.seed if arguments.seed is not None else graine_par_defaut())
    entrainement, test = generer_finegrained(spec)
    os.makedirs(arguments.out_dir, exist_ok=True)
    ecrire, extension = (ecrire_binaire, ".bin") if arguments.format == "bin" else (ecrire_csv, ".csv")
    chemins = []
    for nom, jeu in (("train", entrainement), ("test", test)):
        chemins.append(os.path.join(arguments.out_dir, nom + extension))
        ecrire(jeu, chemins[-1])
    if arguments.severities:
        dossier = os.path.join(arguments.out_dir, dossier_corrompus)
        os.makedirs(dossier, exist_ok=True)
        for severite in arguments.severities:
            corrompu = corrompre(test, "gaussian_noise", severite, spec.graine)
            chemins.append(os.path.join(dossier, "test_severite_{0}{1}".format(severite, extension)))
            ecrire(corrompu, chemins[-1])
    print("Banc d'essai : {0} classes, dimension {1}".format(spec.nombre_classes, spec.dimension))
    for chemin in chemins:
        print("  " + chemin)
    return 0


def commande_entrainer(arguments: argparse.Namespace) -> int:
    """
    Entraîne le modèle de base, l'écrit dans ``modele.bin`` et affiche ses précisions top-1 et top-5 et sa perte moyenne.
    Avec ``--target-top1``, s'arrête au premier palier d'époques (borné par ``--epochs``) dont la précision top-1 sur
    ``--test`` atteint la cible.
    """

    spec = SpecModele(arguments.hidden, arguments.split, arguments.batch_size, arguments.lr, arguments.momentum,
                      arguments.weight_decay)
    entrainement = lire_jeu(arguments.train)
    graine = arguments.seed if arguments.seed is not None else graine_par_defaut()
    test = lire_jeu(arguments.test) if arguments.test else None
    if arguments.target_top1 is None:
        modele, pertes = entrainer_base(spec, entrainement, arguments.epochs, graine)
    elif test is None:
        raise ErreurConfiguration("L'option --target-top1 demande un jeu --test")
    else:
        paliers = [palier for palier in paliers_epoques if palier < arguments.epochs] + [arguments.epochs]
        modele, epoques, _ = entrainer_jusqu_a(spec, entrainement, test, arguments.target_top1, graine, paliers)
        pertes = []
        print("Palier retenu : {0} époques".format(epoques))
    os.makedirs(arguments.out_dir, exist_ok=True)
    chemin = os.path.join(arguments.out_dir, "modele.bin")
    enregistrer_modele(modele, chemin)
    print("Modèle écrit dans {0} (empreinte {1})".format(chemin, modele.empreinte()))
    if pertes:
        print("Perte de la dernière époque : {0:.4f}".format(pertes[-1]))
    jeux = [("entraînement", entrainement)]
    if test is not None:
        jeux.append(("test", test))
    for nom, jeu in jeux:
        print("Précision {0} : top-1 {1:.2f}%, top-5 {2:.2f}%, perte {3:.4f}".format(
            nom, 100 * precision_top_k(modele, jeu, 1), 100 * precision_top_k(modele, jeu, 5), perte_moyenne(modele, jeu)))
    return 0


def _ecrire_rapport(rapport: RapportTransitions, dossier: str, nom: str) -> None:
    rapport.ecrire_json(os.path.join(dossier, nom + ".json"))
    rapport.ecrire_csv(os.path.join(dossier, nom + ".csv"))


def commande_executer(arguments: argparse.Namespace) -> int:
    """
    Exécute la boucle fermée, écrit ``report.json`` et ``report.csv`` puis affiche le résumé.
    Avec ``--check-equivalence``, compare aussi le mode par groupes (``Q = |D_low|``) et le mode en ligne.
    """

    configuration = _configuration(arguments)
    modele, entrainement, test = _charger_contexte(configuration)
    dossier = _dossier_sortie(configuration)
    rapport = executer(modele, entrainement, test, configuration, arguments.jobs)
    _ecrire_rapport(rapport, dossier, "report")
    print(rapport.resume())
    print("Rapport écrit dans {0}".format(os.path.join(dossier, "report.json")))
    if arguments.check_equivalence:
        groupes = max(1, rapport.extras["low_confidence"])
        par_groupes = executer_boucle_fermee(modele, entrainement, test, configuration.modifier(groupes=groupes),
                                             arguments.jobs)
        en_ligne = executer_en_ligne(modele, entrainement, test, configuration, arguments.jobs)
        print("Équivalence en ligne / groupes (Q = {0}) : {1}".format(
            groupes, par_groupes.finales() == en_ligne.finales()))
    return 0


def _valeurs_balayage(axe: str, saisie: str) -> List[Any]:
    """
    :param axe: axe de balayage.
    :param saisie: valeurs séparées par des virgules.
    :return: valeurs converties.
    :raises ErreurConfiguration: si la liste est vide ou une valeur invalide.
    """

    convertisseurs: Dict[str, Callable[[str], Any]] = {
        "epsilon": validateur_epsilon, "clusters": validateur_entier_positif, "topk": validateur_entier_positif,
        "epochs": validateur_entier_positif_ou_nul, "proportion": validateur_proportion, "score": str.strip,
        "lambda": validateur_reel_positif, "suffix": validateur_suffixe, "severity": str.strip,
    }
    parties = [partie.strip() for partie in saisie.split(",") if partie.strip()]
    if not parties:
        raise ErreurConfiguration("La liste des valeurs du balayage est vide")
    try:
        return [convertisseurs[axe](partie) for partie in parties]
    except argparse.ArgumentTypeError as erreur:
        raise ErreurConfiguration("Valeur invalide pour l'axe {0} : {1}".format(axe, erreur))


def _jeux_corrompus(chemin: str, extension: str,
                    valeurs: Optional[Sequence[str]]) -> List[Tuple[str, FichierDonnees]]:
    """
    Lit les jeux de test valides du dossier. Une valeur ``v`` retient les fichiers dont le nom finit par ``_v``.

    :return: couples ``(nom, fichier lu)`` par chemin croissant.
    :raises ErreurConfiguration: si aucun fichier ne correspond aux valeurs.
    """

    dossier = Dossier(chemin=chemin, extension=extension, classe=FichierDonnees)
    jeux: List[Tuple[str, FichierDonnees]] = dossier.elements()
    if valeurs is not None:
        jeux = [(nom, lu) for nom, lu in jeux if any(nom.endswith("_" + valeur) for valeur in valeurs)]
        if not jeux:
            raise ErreurConfiguration("Aucun jeu corrompu ne correspond aux valeurs demandées")
    return jeux


def commande_balayer(arguments: argparse.Namespace) -> int:
    """
    Une exécution par valeur de l'axe, à partir du même modèle et de la même graine. Écrit ``sweep_<axe>.csv``
    (``value,acc,f2t,t2f,tpi``) et un rapport JSON par valeur. L'axe ``score`` écrit aussi les courbes F1T5.
    Sur l'axe ``severity``, le seuil par défaut est ``epsilon_corrompu`` ; une option ou le fichier ``--config`` l'emporte.
    """

    axe = arguments.axis
    defauts = ConfigurationExecution(graine=graine_par_defaut(), epsilon=epsilon_corrompu) if axe == "severity" else None
    configuration = _configuration(arguments, defauts)
    modele, entrainement, test = _charger_contexte(configuration)
    dossier = _dossier_sortie(configuration)
    corrompus: Dict[str, JeuDonnees] = {}
    points: List[Tuple[str, Any]] = []
    if axe == "severity":
        valeurs = _valeurs_balayage(axe, arguments.values) if arguments.values is not None else None
        chemin = arguments.corrupted_dir or os.path.join(dossier, dossier_corrompus)
        for nom, lu in _jeux_corrompus(chemin, arguments.extension, valeurs):
            if lu.jeu is not None:
                corrompus[nom] = lu.jeu
                points.append((nom, lu.chemin))
    else:
        if arguments.values is None:
            raise ErreurConfiguration("L'option --values est obligatoire pour l'axe {0}".format(axe))
        points = [(str(valeur), valeur) for valeur in _valeurs_balayage(axe, arguments.values)]

    lignes = []
    courbes = []
    for etiquette, valeur in points:
        if axe == "suffix" and valeur == 0:
            valeur = None
        variante = configuration.modifier(**{axes_balayage[axe]: valeur})
        jeu_test = corrompus.get(etiquette, test)
        rapport = executer(modele, entrainement, jeu_test, variante, arguments.jobs)
        rapport.ecrire_json(os.path.join(dossier, "report_{0}_{1}.json".format(axe, etiquette)))
        lignes.append([etiquette, repr(rapport.precision_finale), rapport.comptes["f2t"], rapport.comptes["t2f"],
                       repr(rapport.tpi)])
        journal.info("%s = %s : précision finale %.4f", axe, etiquette, rapport.precision_finale)
        if axe == "score":
            genre = GenreScore.depuis(variante.score)
            predictions = predire(modele, test.caracteristiques, None, genre, 5, variante.temperature_energie)
            courbes.append((genre, courbe_f1t5(predictions, list(test.etiquettes))))

    chemin_csv = os.path.join(dossier, "sweep_{0}.csv".format(axe))
    with open(chemin_csv, "w", newline='') as fichier:
        ecrivain = csv.writer(fichier)
        ecrivain.writerow(["value", "acc", "f2t", "t2f", "tpi"])
        ecrivain.writerows(lignes)
    print("{0:>20} | {1:>10} | {2:>6} | {3:>6}".format(axe, "Précision", "#F2T", "#T2F"))
    for etiquette, precision, f2t, t2f, _ in lignes:
        print("{0:>20} | {1:>9.2f}% | {2:>6} | {3:>6}".format(etiquette, 100 * float(precision), f2t, t2f))
    print("Balayage écrit dans {0}".format(chemin_csv))
    if courbes:
        chemin_courbes = os.path.join(dossier, "f1t5.csv")
        ecrire_courbe_f1t5(chemin_courbes, courbes)
        print("Courbes F1T5 écrites dans {0}".format(chemin_courbes))
    return 0


def commande_analyser_scores(arguments: argparse.Namespace) -> int:
    """
    Calcule les courbes F1T5 des trois scores de confiance sur le jeu de test et les écrit dans ``f1t5.csv``.
    Affiche le ratio de chaque score sur le premier décile le moins confiant.
    """

    modele = charger_modele(arguments.model)
    test = lire_jeu(arguments.test)
    os.makedirs(arguments.out_dir, exist_ok=True)
    courbes = []
    for genre in GenreScore:
        predictions = predire(modele, test.caracteristiques, None, genre, 5, arguments.temperature)
        courbes.append((genre, courbe_f1t5(predictions, list(test.etiquettes))))
    chemin = os.path.join(arguments.out_dir, "f1t5.csv")
    ecrire_courbe_f1t5(chemin, courbes)
    decile = max(1, len(test) // 10)
    for genre, courbe in courbes:
        if courbe:
            print("{0:>12} : F1T5 {1:.4f} sur les {2} échantillons les moins confiants".format(
                genre.value, courbe[decile - 1][1], decile))
    print("Courbes écrites dans {0}".format(chemin))
    return 0


def creer_parser() -> argparse.ArgumentParser:
    """
    :return: parser des commandes ``gen-data``, ``train``, ``run``, ``sweep`` et ``score-analysis``.
    """

    parser = argparse.ArgumentParser(description="Inférence en boucle fermée sur un banc d'essai à grain fin.")
    parser.add_argument("-v", "--verbeux", action="store_true", help="Affiche le journal détaillé.")
    commandes = parser.add_subparsers(dest="commande", required=True)

    generer = commandes.add_parser("gen-data", formatter_class=argparse.ArgumentDefaultsHelpFormatter,
                                   help="Génère le banc d'essai.")
    generer.add_argument("--superclasses", type=validateur_entier_positif, default=5, help="Nombre de superclasses.")
    generer.add_argument("--subclasses", type=validateur_entier_positif, default=8,
                         help="Nombre de classes par superclasse.")
    generer.add_argument("--dim", type=validateur_entier_positif, default=32, help="Dimension des entrées.")
    generer.add_argument("--intra", type=validateur_reel_positif, default=3.0,
                         help="Distance entre classes d'une superclasse.")
    generer.add_argument("--inter", type=validateur_reel_positif, default=10.0, help="Distance entre superclasses.")
    generer.add_argument("--train-per-class", type=validateur_entier_positif, default=100,
                         help="Échantillons d'entraînement par classe.")
    generer.add_argument("--test-per-class", type=validateur_entier_positif, default=25,
                         help="Échantillons de test par classe.")
    generer.add_argument("--noise", type=validateur_reel_positif, default=1.0, help="Écart type du bruit.")
    generer.add_argument("--severities", type=validateur_liste_entiers, default=[],
                         help="Sévérités des jeux de test corrompus, par exemple 1,3,5.")
    generer.add_argument("--format", type=str, choices=("csv", "bin"), default="csv", help="Format des fichiers.")
    generer.add_argument("--seed", type=int, default=None, help="Graine, CLILOOP_SEED par défaut.")
    generer.add_argument("--out-dir", type=str, default="donnees", help="Dossier de sortie.")
    generer.set_defaults(fonction=commande_generer)

    entrainer = commandes.add_parser("train", formatter_class=argparse.ArgumentDefaultsHelpFormatter,
                                     help="Entraîne le modèle de base.")
    entrainer.add_argument("--train", type=str, required=True, help="Jeu d'entraînement.")
    entrainer.add_argument("--test", type=str, default=None, help="Jeu de test évalué après l'entraînement.")
    entrainer.add_argument("--hidden", type=validateur_liste_entiers, default=[64, 64],
                           help="Largeur des couches cachées.")
    entrainer.add_argument("--split", type=validateur_entier_positif_ou_nul, default=None,
                           help="Nombre de couches superficielles, la moitié par défaut.")
    entrainer.add_argument("--epochs", type=validateur_entier_positif_ou_nul, default=20, help="Nombre d'époques.")
    entrainer.add_argument("--target-top1", type=validateur_epsilon, default=None,
                           help="Précision top-1 visée sur --test : l'entraînement s'arrête au premier palier qui l'atteint.")
    entrainer.add_argument("--batch-size", type=validateur_entier_positif, default=64, help="Taille des lots.")
    entrainer.add_argument("--lr", type=validateur_reel_positif, default=0.05, help="Taux d'apprentissage initial.")
    entrainer.add_argument("--momentum", type=validateur_reel_positif, default=0.9, help="Moment du SGD.")
    entrainer.add_argument("--weight-decay", type=validateur_reel_positif, default=1e-4, help="Pénalité L2.")
    entrainer.add_argument("--seed", type=int, default=None, help="Graine, CLILOOP_SEED par défaut.")
    entrainer.add_argument("--out-dir", type=str, default="modeles", help="Dossier de sortie.")
    entrainer.set_defaults(fonction=commande_entrainer)

    executer_parser = commandes.add_parser("run", help="Exécute la boucle fermée.")
    _ajouter_options_execution(executer_parser)
    executer_parser.add_argument("--check-equivalence", action="store_true",
                                 help="Compare le mode par groupes (Q = nombre d'échantillons peu confiants) au mode "
                                      "en ligne.")
    executer_parser.set_defaults(fonction=commande_executer)

    balayer = commandes.add_parser("sweep", help="Balaye un paramètre de la boucle fermée.")
    _ajouter_options_execution(balayer)
    balayer.add_argument("--axis", type=str, choices=tuple(axes_balayage), required=True, help="Paramètre balayé.")
    balayer.add_argument("--values", type=str, default=None, help="Valeurs séparées par des virgules.")
    balayer.add_argument("--corrupted-dir", type=str, default=None,
                         help="Dossier des jeux de test corrompus (axe severity).")
    balayer.add_argument("--extension", type=str, default=".csv", help="Extension des jeux corrompus.")
    balayer.set_defaults(fonction=commande_balayer)

    analyser = commandes.add_parser("score-analysis", formatter_class=argparse.ArgumentDefaultsHelpFormatter,
                                    help="Compare les scores de confiance par les courbes F1T5.")
    analyser.add_argument("--model", type=str, required=True, help="Modèle entraîné.")
    analyser.add_argument("--test", type=str, required=True, help="Jeu de test.")
    analyser.add_argument("--temperature", type=validateur_reel_positif, default=1.0,
                          help="Température de l'énergie.")
    analyser.add_argument("--out-dir", type=str, default=".", help="Dossier de sortie.")
    analyser.set_defaults(fonction=commande_analyser_scores)
    return parser


def main(arguments: Optional[Sequence[str]] = None) -> int:
    """
    Analyse les arguments, configure le journal et exécute la commande.

    :param arguments: arguments de la ligne de commande, ``sys.argv[1:]`` par défaut.
    :return: code de sortie, 0 si la commande a abouti.
    """

    options = creer_parser().parse_args(arguments)
    logging.basicConfig(level=logging.DEBUG if options.verbeux else logging.WARNING,
                        format="%(levelname)s %(name)s : %(message)s")
    try:
        code: int = options.fonction(options)
    except (ExceptionBoucle, OSError, EOFError) as erreur:
        print(erreur)
        return 1
    return code
