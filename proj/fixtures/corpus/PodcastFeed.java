package player.net;

import java.util.ArrayList;
import java.util.List;

/**
 * One subscribed podcast feed. Refreshing pulls the episode list; artwork
 * and audio are downloaded lazily per episode.
 */
public class PodcastFeed {

    private final String feedUrl;
    private final List<Episode> episodeList = new ArrayList<>();

    public PodcastFeed(String feedUrl) {
        this.feedUrl = feedUrl;
    }

    public void refreshFeedEpisodes() {
        String xml = HttpGateway.get(feedUrl, "player/1.0");
        if (xml == null) {
            return;
        }
        episodeList.clear();
        for (Episode episode : Episode.parseFeed(xml)) {
            episodeList.add(episode);
        }
    }

    public void downloadEpisodeAudio(String episodeUrl) {
        Episode episode = findEpisode(episodeUrl);
        if (episode != null && !episode.isDownloaded()) {
            episode.download();
        }
    }

    public void markEpisodePlayed(String episodeUrl) {
        Episode episode = findEpisode(episodeUrl);
        if (episode != null) {
            episode.setPlayed(true);
        }
    }

    private Episode findEpisode(String episodeUrl) {
        for (Episode episode : episodeList) {
            if (episode.audioUrl().equals(episodeUrl)) {
                return episode;
            }
        }
        return null;
    }
}
